fn main() {
    std::process::exit(qprag::cli::run());
}
