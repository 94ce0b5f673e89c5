fn main() {
    std::process::exit(trr_core::cli::run(std::env::args_os()));
}
