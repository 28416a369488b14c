fn main() {
    std::process::exit(xxz_dm::run_cli(std::env::args_os()));
}
