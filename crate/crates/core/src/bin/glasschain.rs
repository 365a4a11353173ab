fn main() {
    std::process::exit(glasschain::cli::run());
}
