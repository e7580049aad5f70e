fn main() {
    std::process::exit(qpovm::cli::run());
}
