fn main() {
    std::process::exit(ffdist::cli::run(std::env::args_os()));
}
