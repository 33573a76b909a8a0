fn main() {
    std::process::exit(uavris_harness::cli::main_with(std::env::args_os()));
}
