use clap::Parser;

fn main() {
    let cli = match gentle_tilt_cli::Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { gentle_tilt_cli::EXIT_INPUT } else { gentle_tilt_cli::EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(gentle_tilt_cli::main_with(&cli));
}
