fn main() {
    std::process::exit(fermion_encodings::cli::run(std::env::args()));
}
