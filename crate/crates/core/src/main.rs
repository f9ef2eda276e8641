fn main() {
    std::process::exit(symsub::cli::run(std::env::args_os()));
}
