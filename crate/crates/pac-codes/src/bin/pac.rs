fn main() {
    std::process::exit(pac_codes::cli::parse_and_dispatch(std::env::args()));
}
