fn main() {
    std::process::exit(urllc_sim::cli::run_cli(std::env::args_os()));
}
