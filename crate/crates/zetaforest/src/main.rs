fn main() {
    let (code, output) = zetaforest::cli::run(std::env::args());
    if !output.is_empty() {
        // Diagnostics and results go to stdout (including rejected `check`
        // reports); error messages go to stderr.
        if output.starts_with("error") {
            eprintln!("{output}");
        } else {
            println!("{output}");
        }
    }
    std::process::exit(code);
}
