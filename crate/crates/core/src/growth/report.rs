use super::tower::{degree_quantities, DetMethod, LevelReport, TowerReport};

const RAW_TAIL: [&str; 6] = ["d_hn", "ln_tors", "ln_det_c", "ln_det_alpha", "rho_z", "rho_2"];

impl TowerReport {
    /// `level_index, index, degree`, the raw columns, their `_per_index`
    /// versions and a trailing `flag`.
    pub fn csv_header(&self) -> Vec<String> {
        let mut raw = vec!["betti_q".to_string()];
        raw.extend(self.primes.iter().map(|p| format!("betti_p_{p}")));
        raw.extend(RAW_TAIL.iter().map(|s| s.to_string()));
        let mut out: Vec<String> = ["level_index", "index", "degree"].iter().map(|s| s.to_string()).collect();
        out.extend(raw.iter().cloned());
        out.extend(raw.iter().map(|s| format!("{s}_per_index")));
        out.push("flag".into());
        out
    }

    /// One record per level and reported degree.
    pub fn csv_records(&self) -> Vec<Vec<String>> {
        let mut out = Vec::new();
        for l in &self.levels {
            for d in &l.degrees {
                let mut row = vec![l.level_index.to_string(), l.index.to_string(), d.degree.to_string()];
                row.push(d.betti_q.to_string());
                row.extend(self.primes.iter().map(|p| d.betti_mod_p[p].to_string()));
                row.push(d.d_hn.to_string());
                for v in [d.ln_tors, d.ln_det_c, d.ln_det_alpha, l.rho_z, l.rho_2] {
                    row.push(v.to_string());
                }
                for (_, v) in degree_quantities(l, d, &self.primes) {
                    row.push(v.to_string());
                }
                row.push(l.per_index(l.rho_z).to_string());
                row.push(l.per_index(l.rho_2).to_string());
                row.push(flag(l));
                out.push(row);
            }
        }
        out
    }
}

/// `degenerate` when the deck action on rational homology is nontrivial,
/// `fourier` when determinants come from the character spectrum.
fn flag(l: &LevelReport) -> String {
    let mut parts = Vec::new();
    if l.degenerate {
        parts.push("degenerate");
    }
    if l.det_method == DetMethod::Fourier {
        parts.push("fourier");
    }
    parts.join(";")
}
