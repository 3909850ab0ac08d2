//! Tabulate the closed-form upper bound on the probability that a random
//! matrix contains an artifact cluster, showing the phase-transition cliff.
//!
//!     cargo run --release --example probe_artifacts

use flagmine::synth::artifact_probability;

fn main() {
    let (m, n) = (1000, 1000);
    println!("artifact probability bound in a {m}x{n} matrix, fuzziness 1");
    println!("rows: cluster side as a fraction of the matrix; cols: error fraction w");
    print!("{:>8}", "|I|=|J|");
    let ws = [0.001, 0.002, 0.005, 0.01, 0.02, 0.05];
    for w in ws {
        print!("{w:>10}");
    }
    println!();
    for frac in [0.002, 0.005, 0.01, 0.02, 0.04] {
        let side = (frac * m as f64) as usize;
        print!("{side:>8}");
        for w in ws {
            let p = artifact_probability(m, n, side, side, w, 1);
            print!("{p:>10.3}");
        }
        println!();
    }
    println!();
    println!("clusters above ~0.5% of the matrix side are essentially never artifacts");
}
