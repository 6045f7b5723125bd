use std::io::{self, Write};

fn main() {
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::BufWriter::new(io::stdout().lock());
    let mut err = io::stderr();
    let code = sxl::cli::run(std::env::args_os(), &mut input, &mut out, &mut err);
    let _ = out.flush();
    drop(out);
    std::process::exit(code);
}
