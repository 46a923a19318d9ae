fn main() {
    std::process::exit(spdc::cli::run());
}
