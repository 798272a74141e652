use std::process::ExitCode;

use adelic_image::cli::{default_cache_dir, run, Cli};
use adelic_image::client::{Client, HttpTransport};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if cli.workers > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global();
    }
    let cache = cli.cache_dir.clone().unwrap_or_else(default_cache_dir);
    let client = Client::new(Box::new(HttpTransport::default()), cache, cli.offline);
    let mut out = std::io::stdout().lock();
    match run(&cli, &client, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
