//! Acceptance criteria 1–13. One PASS/FAIL line per criterion goes to stderr
//! (uncaptured) and to target/acceptance.txt; the test fails if any criterion does.

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use cikit::ci_ideal::{ci_ideal, permutation_commutes, sum_ci_ideals};
use cikit::ci_model::{apply_permutation, enumerate_elementary, enumerate_structural, sigma};
use cikit::cone::Cone;
use cikit::imset::{build_matrix, decompose, extend_quadratic_binomial, verify_relation};
use cikit::poly::{dim_degree, ideal_contains, ideal_equal};
use cikit::relation_lang::{parse_relation_text, parse_statement};
use cikit::reports::{self, CellStatus};
use cikit::toric::{classify, degree_profile, graver_basis, markov_basis, ToricBinomial};
use cikit::verify::verify_file;
use cikit::{Budget, CIRelation, CIStatement, Permutation, StateVector, StructuralType};

type Outcome = Result<String, String>;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn st(s: &str) -> CIStatement {
    parse_statement(s).unwrap()
}

fn sts(list: &[&str]) -> Vec<CIStatement> {
    list.iter().map(|s| st(s)).collect()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn unbounded() -> Budget {
    Budget::seconds(3600.0)
}

static GRAVER4: OnceLock<(Vec<ToricBinomial>, Duration)> = OnceLock::new();

fn graver4() -> &'static (Vec<ToricBinomial>, Duration) {
    GRAVER4.get_or_init(|| {
        let t = Instant::now();
        let g = graver_basis(&build_matrix(4).unwrap(), &unbounded()).expect("Graver n=4");
        (g, t.elapsed())
    })
}

fn c1() -> Outcome {
    let counts: Vec<usize> = (2..=5).map(|n| enumerate_elementary(n).map(|v| v.len())).collect::<Result<_, _>>().map_err(e)?;
    ensure(counts == [1, 6, 24, 80], format!("σ counts {counts:?}"))?;
    for n in 2..=5u8 {
        ensure(sigma(n).map_err(e)? as usize == counts[n as usize - 2], "sigma disagrees with enumeration")?;
    }
    let r3 = build_matrix(3).map_err(e)?.rank();
    let r4 = build_matrix(4).map_err(e)?.rank();
    ensure((r3, r4) == (4, 11), format!("ranks {r3}, {r4}"))?;
    Ok(format!("σ = {counts:?}; rank 𝒜₃ = {r3}, rank 𝒜₄ = {r4}"))
}

fn c2() -> Outcome {
    let a = build_matrix(3).map_err(e)?;
    let m = markov_basis(&a, &unbounded()).map_err(e)?;
    let c = classify(&m, &a).map_err(e)?;
    ensure(m.len() == 3, format!("{} Markov elements", m.len()))?;
    ensure(c.iter().all(|x| x.total_degree == 2), "non-quadratic element")?;
    let orbits: BTreeSet<usize> = c.iter().map(|x| x.symmetry_class_id).collect();
    ensure(orbits.len() == 1, format!("{} orbits", orbits.len()))?;
    let g = graver_basis(&a, &unbounded()).map_err(e)?;
    ensure(g == m, "Graver(𝒜₃) differs from Markov(𝒜₃)")?;
    Ok("3 quadratics, 1 orbit, Graver = Markov".into())
}

fn c3() -> Outcome {
    let a = build_matrix(4).map_err(e)?;
    let m = markov_basis(&a, &unbounded()).map_err(e)?;
    let prof = degree_profile(&classify(&m, &a).map_err(e)?);
    let degs: Vec<usize> = prof.iter().map(|p| p.1).collect();
    let orbs: Vec<usize> = prof.iter().map(|p| p.2).collect();
    let detail = format!("{} generators; by degree {:?}: counts {degs:?}, orbits {orbs:?}", m.len(), prof.iter().map(|p| p.0).collect::<Vec<_>>());
    ensure(m.len() == 49, detail.clone())?;
    ensure(degs == [24, 4, 21], detail.clone())?;
    ensure(orbs == [2, 1, 2], format!("{detail} (expected orbits [2, 1, 2])"))?;
    Ok(detail)
}

fn c4() -> Outcome {
    let a = build_matrix(4).map_err(e)?;
    let (g, took) = graver4();
    let c = classify(g, &a).map_err(e)?;
    let hm = c.iter().filter(|x| x.is_homogeneous && x.is_multilinear).count();
    let ml = c.iter().filter(|x| x.is_multilinear).count();
    let hom = c.iter().filter(|x| x.is_homogeneous).count();
    let sqfree_one_side = g.iter().filter(|b| {
        let v = b.vector();
        v.iter().all(|&x| x <= 1) || v.iter().all(|&x| x >= -1)
    }).count();
    let mut by_degree = std::collections::BTreeMap::<u32, (usize, usize)>::new();
    for x in &c {
        let slot = by_degree.entry(x.total_degree).or_default();
        slot.0 += 1;
        slot.1 += (x.is_homogeneous && x.is_multilinear) as usize;
    }
    let breakdown: Vec<String> = by_degree.iter().map(|(d, (all, m))| format!("deg {d}: {m}/{all}")).collect();
    let detail = format!(
        "{} elements in {:.1}s; homogeneous ∧ multilinear = {hm} ({}); alternative readings: multilinear = {ml}, homogeneous = {hom}, squarefree on one side = {sqfree_one_side}",
        g.len(),
        took.as_secs_f64(),
        breakdown.join(", ")
    );
    ensure(g.len() == 3667, detail.clone())?;
    ensure(hm == 2311, format!("{detail} (expected 2311)"))?;
    Ok(detail)
}

fn quadratic_extensions(n: u8, basis: &[ToricBinomial]) -> Result<Vec<CIRelation>, String> {
    let a = build_matrix(n).map_err(e)?;
    let stmts = a.statements();
    let mut rels = Vec::new();
    for b in basis.iter().filter(|b| b.degree() == 2) {
        let expr = b.to_expr(&stmts).map_err(e)?;
        let r = extend_quadratic_binomial(&expr, n).map_err(e)?.ok_or_else(|| format!("{} does not extend", b.render(&stmts)))?;
        let v = verify_relation(&r, n).map_err(e)?;
        ensure(v.valid && r.sides().len() == 2 && r.target().is_some(), format!("extension of {} is not a valid three-sided relation", b.render(&stmts)))?;
        rels.push(r);
    }
    Ok(rels)
}

fn c5() -> Outcome {
    let a3 = build_matrix(3).map_err(e)?;
    let g3 = graver_basis(&a3, &unbounded()).map_err(e)?;
    let r3 = quadratic_extensions(3, &g3)?;
    let t3: BTreeSet<String> = r3.iter().map(|r| r.target().unwrap().to_string()).collect();
    let s3: BTreeSet<String> = enumerate_structural(3).map_err(e)?.iter().map(|(s, _)| s.to_string()).collect();
    ensure(r3.len() == t3.len() && t3 == s3, format!("n=3 targets {t3:?} vs 𝒮₃ {s3:?}"))?;

    let r4 = quadratic_extensions(4, &graver4().0)?;
    let (mut iii, mut iv) = (0, 0);
    for r in &r4 {
        match StructuralType::of(&r.target().unwrap()) {
            Some(StructuralType::TypeIII) => iii += 1,
            Some(StructuralType::TypeIV) => iv += 1,
            t => return Err(format!("target {} has type {t:?}", r.target().unwrap())),
        }
    }
    ensure(r4.len() == 24 && (iii, iv) == (12, 12), format!("n=4: {} quadratics, {iii} Type III / {iv} Type IV", r4.len()))?;
    Ok(format!("n=3 bijection onto 𝒮₃ ({} statements); n=4 24 quadratics → 12 Type III / 12 Type IV", s3.len()))
}

fn c6() -> Outcome {
    let s4 = enumerate_structural(4).map_err(e)?;
    let count = |t| s4.iter().filter(|(_, x)| *x == Some(t)).count();
    let types = [StructuralType::TypeI, StructuralType::TypeII, StructuralType::TypeIII, StructuralType::TypeIV].map(count);
    ensure(s4.len() == 31 && types == [3, 4, 12, 12], format!("{} statements, types {types:?}", s4.len()))?;
    let has = |target: &str, k: usize, parts: &[&str]| -> Result<(), String> {
        let mut want = sts(parts);
        want.sort();
        let ds = decompose(&st(target), 4, k).map_err(e)?;
        ensure(ds.iter().any(|d| d.parts == want), format!("{parts:?} missing from decompositions of {target}"))
    };
    has("123 _||_ 4 | e", 3, &["2 _||_ 4 | 13", "1 _||_ 4 | 3", "3 _||_ 4 | e"])?;
    has("123 _||_ 4 | e", 3, &["3 _||_ 4 | 12", "1 _||_ 4 | 2", "2 _||_ 4 | e"])?;
    has("12 _||_ 34 | e", 4, &["1 _||_ 3 | 24", "1 _||_ 4 | 2", "2 _||_ 4 | 3", "2 _||_ 3 | e"])?;
    has("12 _||_ 34 | e", 4, &["1 _||_ 4 | 23", "1 _||_ 3 | 2", "2 _||_ 3 | 4", "2 _||_ 4 | e"])?;
    Ok(format!("31 statements, types {types:?}; stated decompositions found"))
}

fn errata_lines() -> BTreeSet<usize> {
    let text = std::fs::read_to_string(root().join("docs/errata.md")).expect("docs/errata.md");
    text.lines()
        .filter_map(|l| l.strip_prefix("| appendix_verbatim.rel | "))
        .map(|rest| rest.split('|').next().unwrap().trim().parse().expect("line number"))
        .collect()
}

fn c7() -> Outcome {
    let corrected = verify_file(root().join("data/appendix_corrected.rel"), 4).map_err(e)?;
    ensure(corrected.invalid == 0 && corrected.total == 32, format!("corrected: {} of {} INVALID", corrected.invalid, corrected.total))?;
    let verbatim = verify_file(root().join("data/appendix_verbatim.rel"), 4).map_err(e)?;
    let got: BTreeSet<usize> = verbatim.invalid_lines().into_iter().collect();
    let ledger = errata_lines();
    ensure(got == ledger, format!("verbatim INVALID {got:?} vs errata {ledger:?}"))?;
    Ok(format!("corrected 32/32 VALID; verbatim INVALID lines {got:?} = errata"))
}

fn c8() -> Outcome {
    let c3 = Cone::new(3).map_err(e)?;
    let l3 = c3.face_lattice().map_err(e)?;
    let f3 = l3.f_vector();
    ensure(f3 == [1, 6, 9, 5, 1] && l3.contains(0) && l3.contains(c3.full_set()), format!("n=3 f-vector {f3:?}"))?;

    let c4 = Cone::new(4).map_err(e)?;
    let l4 = c4.face_lattice().map_err(e)?;
    let f4 = l4.f_vector();
    ensure(f4 == [1, 24, 228, 1128, 3212, 5560, 5980, 3985, 1596, 356, 37, 1] && l4.total() == 22108, format!("n=4 f-vector {f4:?}, total {}", l4.total()))?;

    let facets = c4.facets().map_err(e)?;
    let a = build_matrix(4).map_err(e)?;
    let stmts = a.statements();
    let quads: Vec<&ToricBinomial> = graver4().0.iter().filter(|b| b.degree() == 2).collect();
    for b in &quads {
        let support: Vec<CIStatement> = b.vector().iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| stmts[i]).collect();
        let rays = c4.ray_set(&support).map_err(e)?;
        ensure(l4.contains(rays) && c4.dim_of(rays) == 3, format!("quadruple {} is not a dim-3 face", b.render(&stmts)))?;
    }

    let mut sides = 0;
    let relations = parse_relation_text(&std::fs::read_to_string(root().join("data/appendix_corrected.rel")).map_err(e)?).relations;
    let extended = quadratic_extensions(4, &graver4().0)?;
    for r in relations.iter().map(|(_, r)| r).chain(extended.iter()) {
        for side in r.sides() {
            if side.terms().len() < 2 || !side.terms().iter().all(|t| t.is_elementary()) {
                continue;
            }
            ensure(!c4.is_face(side.terms(), &facets).map_err(e)?, format!("side {:?} is a face", side.terms().iter().map(|t| t.to_string()).collect::<Vec<_>>()))?;
            sides += 1;
        }
    }
    Ok(format!("n=3 {f3:?}; n=4 total 22108; {} quadruples are dim-3 faces; {sides} relation sides are not faces", quads.len()))
}

fn c9() -> Outcome {
    let want = [(5, 4), (6, 10), (7, 6), (7, 6)];
    let j3 = sts(&["1 _||_ 23 | e"]);
    let mut got = Vec::new();
    for (sv, w) in reports::table1_columns().iter().zip(want) {
        let dd = dim_degree(&sum_ci_ideals(&j3, sv).map_err(e)?, &unbounded()).map_err(e)?;
        let segre = reports::segre_dim_degree(sv);
        ensure((dd.krull_dim as u64, dd.degree) == w, format!("{sv}: computed ({}, {}), want {w:?}", dd.krull_dim, dd.degree))?;
        ensure(segre == w, format!("{sv}: Segre formula {segre:?}, want {w:?}"))?;
        got.push(w);
    }
    Ok(format!("J₃ column {got:?}, matches the Segre formula"))
}

fn c10() -> Outcome {
    let binary = StateVector::binary(3);
    let b = unbounded();
    let rows = reports::table3_rows();
    let row = |label: &str| rows.iter().find(|r| r.label == label).unwrap().model.clone();
    let mut fails = Vec::new();
    for (label, want) in [("M1^1", (7, 2)), ("M1^6", (6, 4)), ("M4", (4, 6))] {
        let dd = dim_degree(&sum_ci_ideals(&row(label), &binary).map_err(e)?, &b).map_err(e)?;
        if (dd.krull_dim as u64, dd.degree) != want {
            fails.push(format!("{label}: ({}, {}) vs {want:?}", dd.krull_dim, dd.degree));
        }
    }
    let i = |m: &[CIStatement]| sum_ci_ideals(m, &binary).unwrap();
    if !ideal_equal(&i(&row("M3^2")), &i(&sts(&["12 _||_ 3 | e"])), &b).map_err(e)? {
        fails.push("I(M3^2) ≠ I(12⊥3|∅)".into());
    }
    if !ideal_equal(&i(&row("M4")), &i(&reports::full_independence_statements()), &b).map_err(e)? {
        fails.push("I(M4) ≠ I_E".into());
    }
    if !ideal_contains(&i(&row("M4")), &i(&row("M3^5")), &b).map_err(e)? {
        fails.push("I(M3^5) ⊄ I(M4)".into());
    }
    let missing = reports::missing_printed_generators(&st("12 _||_ 3 | e")).map_err(e)?;
    if !missing.is_empty() {
        let owners: Vec<String> = reports::statements_with_printed_generators().map_err(e)?.iter().map(|s| s.to_string()).collect();
        fails.push(format!(
            "printed generators of I(12⊥3|∅) not all present: missing {missing:?} (the six printed binomials generate I({}))",
            owners.join(", ")
        ));
    }
    if fails.is_empty() {
        Ok("M1^1 (7,2), M1^6 (6,4), M4 (4,6); identities and containment hold; generators verbatim".into())
    } else {
        Err(format!("dim/degree and ideal identities checked; {}", fails.join("; ")))
    }
}

fn c11() -> Outcome {
    let rows = reports::table3_rows();
    let m32 = rows.iter().find(|r| r.label == "M3^2").unwrap().model.clone();
    let res = reports::lex_gb_claim(&m32, &sts(&["12 _||_ 3 | e"]), &unbounded()).map_err(e)?;
    let passing: Vec<&str> = res.iter().filter(|(_, ok)| *ok).map(|(rev, _)| if *rev { "reversed (p₂₂₂ greatest)" } else { "outcome-lex (p₁₁₁ greatest)" }).collect();
    ensure(!passing.is_empty(), "lex GB differs under both variable orders")?;
    Ok(format!("holds under: {}", passing.join(", ")))
}

fn c12() -> Outcome {
    let binary = StateVector::binary(3);
    let b = unbounded();
    let mut checked = 0;
    for s in enumerate_elementary(3).map_err(e)? {
        let base = dim_degree(&ci_ideal(&s, &binary).map_err(e)?, &b).map_err(e)?;
        for g in Permutation::all(3) {
            ensure(permutation_commutes(&s, &g, &binary).map_err(e)?, format!("{s} under {g}: permutation does not commute"))?;
            let img = apply_permutation(&s, &g).map_err(e)?;
            let dd = dim_degree(&ci_ideal(&img, &binary).map_err(e)?, &b).map_err(e)?;
            ensure(dd == base, format!("dim/degree of {s} changes under {g}"))?;
            checked += 1;
        }
    }
    let b4 = StateVector::binary(4);
    for (g, a, w) in reports::prop2_witnesses() {
        let (ok, detail) = reports::prop2_witness_holds(&g, &a, &w, &b4, &b).map_err(e)?;
        ensure(ok, detail)?;
    }
    Ok(format!("{checked} statement/permutation pairs commute; {} n=4 relation partners isomorphic", reports::prop2_witnesses().len()))
}

fn c13() -> Outcome {
    let secs = 30.0;
    let mut detail = Vec::new();
    for which in ["table1", "table2", "table3"] {
        let t = Instant::now();
        let rep = catch_unwind(|| reports::table_report(which, secs)).map_err(|_| format!("{which} panicked"))?.map_err(e)?;
        let count = |s: CellStatus| rep.cells.iter().filter(|c| c.status == s).count();
        detail.push(format!(
            "{which}: {} cells ({} MATCH, {} DISCREPANCY, {} TIMEOUT, {} N/A) in {:.0}s",
            rep.cells.len(),
            count(CellStatus::Match),
            count(CellStatus::Discrepancy),
            count(CellStatus::Timeout),
            count(CellStatus::NotApplicable),
            t.elapsed().as_secs_f64()
        ));
        if which == "table1" {
            let dim9: Vec<_> = rep
                .cells
                .iter()
                .filter(|c| (c.ideal == "J1" || c.ideal == "J2") && c.quantity == "dim" && c.published.as_deref() == Some("9"))
                .collect();
            ensure(!dim9.is_empty(), "no printed dim-9 cells found")?;
            for c in dim9 {
                let v: u64 = c.computed.as_deref().unwrap_or("0").parse().unwrap_or(0);
                ensure(c.status == CellStatus::Discrepancy && v <= 8, format!("{} {} dim cell is {:?} with computed {v}", c.column, c.ideal, c.status))?;
            }
        }
    }
    Ok(detail.join("; "))
}

#[test]
fn acceptance() {
    let criteria: [(u32, &str, f64, fn() -> Outcome); 13] = [
        (1, "σₙ counts and rank", 1.0, c1),
        (2, "Markov/Graver n=3", 5.0, c2),
        (3, "Markov n=4", 600.0, c3),
        (4, "Graver n=4", 3600.0, c4),
        (5, "quadratic extensions", 60.0, c5),
        (6, "𝒮₄ and decompositions", 120.0, c6),
        (7, "relation file verification", 60.0, c7),
        (8, "face lattices", 600.0, c8),
        (9, "J₃ column and Segre formula", 120.0, c9),
        (10, "solid rows of the model table", 300.0, c10),
        (11, "lex Gröbner claim", 60.0, c11),
        (12, "permutation mechanism", 300.0, c12),
        (13, "discrepancy handling", 1800.0, c13),
    ];
    let out_path = root().join("target/acceptance.txt");
    let mut log = String::new();
    let mut failed = Vec::new();
    for (id, name, limit, f) in criteria {
        // the shared Graver basis is computed once; its time counts toward criterion 4 only
        if id == 5 {
            graver4();
        }
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or("panic".into()))
        });
        let mut secs = t.elapsed().as_secs_f64();
        if id == 4 {
            secs = graver4().1.as_secs_f64().max(secs);
        }
        let r = match r {
            Ok(d) if secs > limit => Err(format!("{d} — took {secs:.1}s, limit {limit}s")),
            other => other,
        };
        let line = match &r {
            Ok(d) => format!("criterion {id:>2} PASS [{secs:.1}s] {name}: {d}\n"),
            Err(d) => format!("criterion {id:>2} FAIL [{secs:.1}s] {name}: {d}\n"),
        };
        let _ = std::io::stderr().write_all(line.as_bytes());
        log.push_str(&line);
        if r.is_err() {
            failed.push(id);
        }
    }
    let _ = std::fs::write(&out_path, &log);
    print!("{log}");
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
