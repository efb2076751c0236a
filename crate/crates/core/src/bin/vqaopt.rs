use std::io::Write;

use vqaopt::cli::{main_with, Io, OUT_DIR_VAR};

fn main() {
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    let code = main_with(
        std::env::args_os(),
        &vqaopt::builtin_registry(),
        Io {
            stdin: &mut stdin.lock(),
            stdout: &mut stdout,
            stderr: &mut stderr,
            out_env: std::env::var_os(OUT_DIR_VAR).map(Into::into),
        },
    );
    let _ = stdout.flush();
    std::process::exit(code);
}
