use std::io::Write;

fn main() {
    let outcome = kspace_cli::run(std::env::args().skip(1), None);
    print!("{}", outcome.stdout);
    if !outcome.stderr.is_empty() {
        let _ = writeln!(std::io::stderr(), "{}", outcome.stderr.trim_end());
    }
    std::process::exit(outcome.code);
}
