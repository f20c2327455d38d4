fn main() {
    std::process::exit(mvlat::cli::run(std::env::args()));
}
