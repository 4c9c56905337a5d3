fn main() {
    std::process::exit(symsep::cli::run_from_env());
}
