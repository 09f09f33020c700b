use clap::Parser;
use depmark_cli::{run, thread_limit, Cli, CliError, CliResult, EXIT_OK};

fn configure_threads() -> CliResult<()> {
    let value = std::env::var("DEPMARK_THREADS").ok();
    if let Some(k) = thread_limit(value.as_deref())? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure threads: {e}")))?;
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    let code = match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("depmark: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
