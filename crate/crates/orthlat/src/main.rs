fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let (code, out) = orthlat::cli::run(std::env::args_os());
    println!("{out}");
    std::process::exit(code);
}
