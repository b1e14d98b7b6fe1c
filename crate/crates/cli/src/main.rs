fn main() {
    std::process::exit(dilation_cli::run_cli(std::env::args_os()));
}
