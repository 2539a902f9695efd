fn main() {
    std::process::exit(gapflow_cli::run(std::env::args_os()));
}
