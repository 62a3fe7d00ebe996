use clap::Parser;
use csknot::cli::{exit, run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the parse-error code
            std::process::exit(if e.use_stderr() { exit::PARSE } else { exit::SUCCESS });
        }
    };
    std::process::exit(run(cli));
}
