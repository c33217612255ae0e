fn main() {
    std::process::exit(circkit::cli::run(std::env::args()));
}
