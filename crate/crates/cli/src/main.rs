fn main() {
    std::process::exit(zgv_cli::run(std::env::args_os()));
}
