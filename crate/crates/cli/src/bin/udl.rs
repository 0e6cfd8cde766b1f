fn main() {
    std::process::exit(udl_cli::dispatch(std::env::args_os()));
}
