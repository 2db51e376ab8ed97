use pscomp::verify;

fn main() {
    let t0 = std::time::Instant::now();
    for name in verify::SUITE_NAMES {
        let t = std::time::Instant::now();
        match verify::run_suite(name, &pscomp::RngStream::new(7, 0)) {
            Ok(rep) => {
                let status = if rep.passed { "PASS".to_string() } else { format!("FAIL: {:?}", rep.details) };
                println!("{:>5} {} [{:.1}s]", name, status, t.elapsed().as_secs_f64());
            }
            Err(e) => println!("{:>5} ERROR: {e}", name),
        }
    }
    println!("total {:.1}s", t0.elapsed().as_secs_f64());
}
