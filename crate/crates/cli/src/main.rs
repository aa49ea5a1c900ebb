fn main() {
    std::process::exit(sppt_cli::run(std::env::args_os()));
}
