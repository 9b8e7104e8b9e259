fn main() {
    std::process::exit(classd::cli::run());
}
