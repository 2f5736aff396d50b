fn main() {
    std::process::exit(segrekit::main_with(std::env::args_os()));
}
