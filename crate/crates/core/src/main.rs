fn main() {
    std::process::exit(qhgeom::cli::run(std::env::args_os()));
}
