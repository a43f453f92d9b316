fn main() {
    std::process::exit(qlgame::cli::run(std::env::args_os()));
}
