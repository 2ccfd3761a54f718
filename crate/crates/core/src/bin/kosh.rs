fn main() {
    std::process::exit(koshliakov::driver::cli_main(std::env::args().collect()));
}
