fn main() {
    std::process::exit(conical_shock::cli::run());
}
