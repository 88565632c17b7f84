fn main() {
    std::process::exit(posetdim_cli::run(std::env::args_os()));
}
