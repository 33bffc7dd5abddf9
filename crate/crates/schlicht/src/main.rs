fn main() {
    std::process::exit(schlicht::cli::run());
}
