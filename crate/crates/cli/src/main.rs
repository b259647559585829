use std::io::{IsTerminal, Write};

fn main() {
    let outcome = qand_cli::run(std::env::args_os());
    let color = std::io::stdout().is_terminal() && std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty());
    let text = if color { qand_cli::colorize(&outcome.stdout) } else { outcome.stdout };
    let _ = std::io::stdout().write_all(text.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}
