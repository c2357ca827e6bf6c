use sft_cli::run_command;

fn main() {
    let outcome = run_command(std::env::args());
    if !outcome.report.is_empty() {
        println!("{}", outcome.report);
    }
    std::process::exit(outcome.exit_code);
}
