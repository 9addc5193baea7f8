#![no_main]

use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated. Census and Hilbert runs are capped so a single
// input stays fast.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args: Vec<&str> = text.split('\0').collect();
    if args.iter().any(|a| a.contains("census") || a.starts_with("--max-points") || a.starts_with("--out") || a.starts_with("--checkpoint")) {
        return;
    }
    let argv = ["wps", "--max-points", "100000"].into_iter().chain(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = wps_cli::run(argv, &mut out, &mut err);
    assert!((0..=3).contains(&code));
});
