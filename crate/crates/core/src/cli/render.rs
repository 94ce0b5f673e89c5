use std::fmt::Write;

use serde_json::Value;

fn monomial(exps: &Value) -> String {
    let parts: Vec<String> = exps
        .as_array()
        .into_iter()
        .flatten()
        .enumerate()
        .filter_map(|(i, e)| match e.as_u64()? {
            0 => None,
            1 => Some(format!("psi{}", i + 1)),
            p => Some(format!("psi{}^{p}", i + 1)),
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn poly(out: &mut String, terms: &Value, indent: &str) {
    for t in terms.as_array().into_iter().flatten() {
        let _ = writeln!(out, "{indent}{:>16}  {}", t["coeff"].as_str().unwrap_or("?"), monomial(&t["exponents"]));
    }
}

fn record(out: &mut String, r: &Value) {
    let _ = writeln!(out, "g = {}, n = {}", r["g"], r["n"]);
    let p = &r["provenance"];
    let _ = writeln!(out, "D = {}   normalization = {}", p["D"].as_str().unwrap_or("?"), p["normalization"].as_str().unwrap_or("?"));
    let _ = writeln!(out, "relations:");
    for (m, w) in p["monomials"].as_array().into_iter().flatten().zip(p["weights"].as_array().into_iter().flatten()) {
        let _ = writeln!(out, "  {:>16}  M = {m}", w.as_str().unwrap_or("?"));
    }
    let _ = writeln!(out, "principal part:");
    poly(out, &r["principal"], "  ");
    match r["boundary"].as_array() {
        Some(b) => {
            let _ = writeln!(out, "boundary: {} terms", b.len());
        }
        None => {
            let _ = writeln!(out, "boundary: not computed");
        }
    }
}

fn mark(ok: &Value) -> &'static str {
    if ok.as_bool() == Some(true) {
        "ok"
    } else {
        "FAIL"
    }
}

/// Human-readable view of a command's result JSON.
pub fn render(command: &str, result: &Value) -> String {
    let mut out = String::new();
    match command {
        "scan" => {
            let _ = writeln!(out, "genus range {}  cells checked {}", result["range"], result["cells_checked"]);
            let _ = writeln!(out, "{:>4} {:>4} {:>4}  l", "g", "n", "k");
            for z in result["zeros"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "{:>4} {:>4} {:>4}  {}", z[0], z[1], z[2], z[3]);
            }
        }
        "d" => {
            let _ = writeln!(out, "D = {}", result.as_str().unwrap_or("?"));
        }
        "principal" | "assemble" => record(&mut out, result),
        "omega" => {
            let _ = writeln!(out, "g = {}, n = {}, b = {}, N = {}", result["g"], result["n"], result["b"], result["N"]);
            for c in result["comparisons"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "{:<12} {}", c["graph"].as_str().unwrap_or("?"), mark(&c["match"]));
                poly(&mut out, &c["value"], "  ");
            }
            let _ = writeln!(out, "kappa-free {}", mark(&result["kappa_free"]));
            let _ = writeln!(out, "last psi degree {}", result["last_psi_degree"]);
            let _ = writeln!(out, "pushforward boundary {}", mark(&result["pushforward_boundary_kappa_free"]));
            let _ = writeln!(out, "overall {}", mark(&result["pass"]));
        }
        "g7" => {
            let _ = writeln!(out, "{:>3} {:>20} {:>20}", "c2", "computed", "expected");
            for r in result["family"].as_array().into_iter().flatten() {
                let _ = writeln!(
                    out,
                    "{:>3} {:>20} {:>20}",
                    r["c2"],
                    r["computed"].as_str().unwrap_or("?"),
                    r["expected"].as_str().unwrap_or("?")
                );
            }
            let _ = writeln!(out, "scalar {}", result["scalar"].as_str().unwrap_or("?"));
            let _ = writeln!(out, "D(3;2,1,1) = {}  D(2;2,2,1) = {}", result["D_211"].as_str().unwrap_or("?"), result["D_221"].as_str().unwrap_or("?"));
            for r in result["records"].as_array().into_iter().flatten() {
                let _ = writeln!(out);
                record(&mut out, r);
            }
            let _ = writeln!(out, "overall {}", mark(&result["pass"]));
        }
        _ => {
            let terms = result.as_array().map_or(0, Vec::len);
            let _ = writeln!(out, "{terms} terms");
            for t in result.as_array().into_iter().flatten() {
                let g = &t["graph"];
                let _ = writeln!(
                    out,
                    "{:>16}  vertices {} edges {} legs {} psi {} kappa {}",
                    t["coeff"].as_str().unwrap_or("?"),
                    g["vertices"],
                    g["edges"],
                    g["legs"],
                    t["psi"],
                    t["kappa"]
                );
            }
        }
    }
    out
}
