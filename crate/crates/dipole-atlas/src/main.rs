fn main() {
    std::process::exit(dipole_atlas::cli::run(std::env::args()));
}
