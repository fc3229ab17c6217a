fn main() {
    std::process::exit(specrange::cli::run(std::env::args_os()));
}
