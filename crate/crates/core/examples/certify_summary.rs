//! Morse-inequality system, Euler-sum and jump criteria on hand-written summaries.

use qmorse::certify::{certify, CritRecord, CritSummary};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // k = 1, one critical point at infinity of index 0
    let one = CritSummary::new(1, 0, 1, vec![CritRecord::new(0, 1, 0, -1)]);
    let r = certify(&one, &[], 1)?;
    println!("k = 1, one index-0 point: {} (system feasible: {})", r.verdict, r.system_verdict.feasible);

    // k = 2 on the disk: c = H(S1) unreduced, Euler-sum target 1 - chi(S1) = 1
    let c = [1, 1, 0, 0];
    let empty = CritSummary::new(2, 0, 1, vec![]);
    let r = certify(&empty, &c, 1)?;
    println!("k = 2, no points:          {} (Euler sum {} vs {})", r.verdict, r.hopf.sum, r.hopf.target);

    let matched = CritSummary::new(2, 0, 1, vec![CritRecord::new(0, 2, 2, -1)]);
    let r = certify(&matched, &c, 1)?;
    println!("k = 2, one index-2 point:  {} (n = {:?})", r.verdict, r.system_verdict.n);
    println!("{}", serde_json::to_string_pretty(&r)?);
    Ok(())
}
