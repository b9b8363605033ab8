//! Scratch probe used during development.
use polyflip::*;

fn main() {
    let budget = explore::Budget::default();
    'outer: for n in 4..=10 {
        for t in explore::enumerate(n, &budget).unwrap() {
            if t.max_degree() > 7 {
                continue;
            }
            if let Err(e) = canon::to_fringe(&t, 7) {
                println!("FAIL n={n} {t:?}: {e}");
                // replay with diagnostics
                let mut cur = t.clone();
                for step in 0..12 {
                    match structure::is_fringe(&cur) {
                        None => { println!("  step {step}: fringe reached"); break; }
                        Some(v) => {
                            println!("  step {step}: cur={cur:?}");
                            println!("    violation {v:?}");
                            let fans = structure::find_fans(&cur);
                            println!("    fans: {fans:?}");
                            let seq = canon::to_fringe(&cur, 7);
                            if seq.is_err() {
                                // apply one step manually via to_fringe internals not public;
                                break;
                            } else { break; }
                        }
                    }
                }
                break 'outer;
            }
        }
    }
    println!("done");
}
