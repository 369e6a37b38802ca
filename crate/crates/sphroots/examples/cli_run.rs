//! Drive the command line front end in-process.

use sphroots::cli::run_with_io;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data/datums");
    for (file, extra) in [("a6_three_blocks.toml", vec!["--algorithm", "optimized"]), ("b3_shared_class.toml", vec!["--trace"])] {
        let mut argv = vec!["sphroots".to_string(), format!("{dir}/{file}")];
        argv.extend(extra.iter().map(|s| s.to_string()));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with_io(&argv, &mut out, &mut err);
        println!("== {file} (exit {code})");
        print!("{}", String::from_utf8_lossy(&out));
        eprint!("{}", String::from_utf8_lossy(&err));
    }
}
