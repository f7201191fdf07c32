use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let exec = hypertan_cli::run(&args);
    print!("{}", exec.stdout);
    eprint!("{}", exec.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(exec.exit_code);
}
