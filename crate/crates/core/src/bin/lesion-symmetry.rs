fn main() {
    std::process::exit(lesion_symmetry::cli::run(std::env::args_os()));
}
