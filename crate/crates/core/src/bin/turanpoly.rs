fn main() {
    std::process::exit(turanpoly::cli::run(std::env::args_os()));
}
