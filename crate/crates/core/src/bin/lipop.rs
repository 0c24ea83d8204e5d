use clap::Parser;
use lipop::cli::{run, Cli, EXIT_INPUT};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let stdout = std::io::stdout();
    if let Err(f) = run(cli, &mut stdout.lock()) {
        eprintln!("lipop: {f}");
        std::process::exit(f.code());
    }
}
