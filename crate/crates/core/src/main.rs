fn main() {
    std::process::exit(qmix::cli::run_from(std::env::args_os()));
}
