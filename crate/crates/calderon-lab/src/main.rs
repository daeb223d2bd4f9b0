fn main() {
    std::process::exit(calderon_lab::lab_cli::run(std::env::args_os()));
}
