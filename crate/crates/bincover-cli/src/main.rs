use clap::Parser;

use bincover_cli::{dispatch, Cli, CliError};

fn main() {
    let cli = Cli::parse();
    if cli.common.jobs != 1 {
        // 0 means "all cores"; rayon treats that as its default.
        let threads = cli.common.jobs;
        let mut builder = rayon::ThreadPoolBuilder::new();
        if threads > 0 {
            builder = builder.num_threads(threads);
        }
        if let Err(e) = builder.build_global() {
            eprintln!("error: cannot configure {threads} worker threads: {e}");
            std::process::exit(2);
        }
    }
    match dispatch(&cli) {
        Ok(output) => {
            print!("{}", output.rendered(cli.common.format));
            std::process::exit(output.exit_code());
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
