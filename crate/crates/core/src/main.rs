fn main() {
    let (out, code) = invhilb::cli::run(std::env::args_os());
    print!("{}", out);
    std::process::exit(code);
}
