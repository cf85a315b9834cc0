fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let (code, report) = pcard_cli::run(&argv);
    println!("{report}");
    std::process::exit(code);
}
