fn main() {
    std::process::exit(sweepopt::bench::main_with_args(std::env::args_os()));
}
