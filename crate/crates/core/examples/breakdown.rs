// scratch analysis: which no-filler classes are blow-ups (two labels
// elementwise interchangeable)
use smv_core::census::*;
fn main() {
    let tables = ClassTables::new(4).unwrap();
    let opts = CensusOptions { require_nonfree: false, ..CensusOptions::default() };
    let recs = enumerate_triangle_classes(4, &opts).unwrap();
    let n = 4usize;
    for r in &recs {
        let mut filler = false;
        'e: for e in 0..n {
            for p in 0..n { for q in p..n {
                let mut t = [p, q, e]; t.sort();
                let bit = tables.triples.iter().position(|&x| x == t).unwrap();
                if r.mask & (1 << bit) == 0 { continue 'e; }
            }}
            filler = true; break;
        }
        if filler { continue; }
        let allowed = |t: [usize; 3]| -> bool {
            let mut s = t; s.sort();
            let bit = tables.triples.iter().position(|&x| x == s).unwrap();
            r.mask & (1 << bit) != 0
        };
        // labels c, d interchangeable elementwise: replacing any single
        // occurrence of c by d (and vice versa) preserves allowedness
        let mut merged = Vec::new();
        for c in 0..n { for d in c+1..n {
            let ok = tables.triples.iter().all(|&t| {
                // all variants of t replacing c<->d entries agree
                let variants = |t: [usize;3]| -> Vec<[usize;3]> {
                    let mut out = vec![t];
                    for i in 0..3 {
                        let mut more = Vec::new();
                        for v in &out {
                            let mut w = *v;
                            if w[i] == c { w[i] = d; more.push(w); }
                            else if w[i] == d { w[i] = c; more.push(w); }
                        }
                        out.extend(more);
                    }
                    out
                };
                let vs = variants(t);
                let first = allowed(vs[0]);
                vs.iter().all(|&v| allowed(v) == first)
            });
            if ok { merged.push((c, d)); }
        }}
        if !merged.is_empty() {
            println!("mask={:07x} blow-up pairs {:?}", r.mask, merged);
        }
    }
    println!("scan complete");
}
