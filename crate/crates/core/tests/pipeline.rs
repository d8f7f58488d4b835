use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use twoelec::pipeline::export::*;
use twoelec::pipeline::{run, RunConfig, Stage};

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn small(out: &Path, q_projected: bool) -> RunConfig {
    let text = format!(
        r#"
charge = 2.0
output = "{}"

[basis]
splines = 18
delta = 0.05
box_radius = 40.0

[ci]
blocks = ["1Se", "3Se", "1Po"]
l_max = 2
n_max = [10, 10, 10]
q_projected = {q_projected}

[density]
pair_points = 24
pair_r_max = 20.0

[delta_demo]
points = 200
"#,
        out.display()
    );
    RunConfig::parse(&text, "small").unwrap()
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

#[test]
fn shipped_presets_load_and_validate() {
    let mut n = 0;
    for e in fs::read_dir(configs_dir()).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "toml") {
            let cfg = RunConfig::load(&p).unwrap();
            assert_eq!(cfg.build_basis().unwrap().len(), 25, "{}", p.display());
            n += 1;
        }
    }
    assert!(n >= 4);
}

#[test]
fn inconsistent_configs_are_rejected_with_specific_messages() {
    let cases = [
        ("charge = -1.0", "charge must be positive"),
        ("[basis]\norder = 2", "basis.order must be at least 3"),
        ("[basis]\nsplines = 3", "too few for order 7"),
        ("[basis]\nquadrature_points = 0", "quadrature_points must be positive"),
        ("[basis]\nbox_radius = 0.0", "box_radius must be positive"),
        ("[basis]\ndelta = 200.0", "basis.delta must lie in"),
        ("[basis]\nkind = \"exponential-linear\"", "junction is required"),
        ("[basis]\njunction = 5.0", "only applies to exponential-linear"),
        ("[basis]\nkind = \"exponential-linear\"\njunction = 0.01", "junction must lie in"),
        ("[ci]\nblocks = [\"1De\"]\nl_max = 1", "ci.l_max = 1 is below L = 2"),
        ("[ci]\nblocks = [\"1Se\", \"1Se\"]", "listed twice"),
        ("[ci]\nblocks = [\"1Po\"]\nl_max = 1\nn_max = [5, 5, 5]", "needs 2"),
        ("[ci]\nl_max = 1\nn_max = [5, 1]", "ci.n_max[1] = 1 leaves no orbital"),
        ("[density]\npair_points = 1", "density mesh needs"),
        ("[density]\npair_r_max = 500.0", "outside the box"),
        ("[delta_demo]\na0 = 0.0", "nonzero a0"),
        ("[delta_demo]\nk_min = 2.0\nk_max = 1.0", "0 < k_min < k_max"),
    ];
    for (text, want) in cases {
        let e = RunConfig::parse(text, "case").unwrap_err().to_string();
        assert!(e.contains(want), "{text:?}: {e}");
    }
    let e = RunConfig::parse("[ci]\nfoo = 1", "case").unwrap_err().to_string();
    assert!(e.contains("case") && e.contains("foo"), "{e}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run(&small(a.path(), false), Stage::All).unwrap();
    let rb = run(&small(b.path(), false), Stage::All).unwrap();
    assert_eq!(ra.files.len(), rb.files.len());
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    assert!(sa.len() > 10);
    assert_eq!(sa.keys().collect::<Vec<_>>(), sb.keys().collect::<Vec<_>>());
    for (k, v) in &sa {
        assert!(v == &sb[k], "{} differs", k.display());
    }
}

#[test]
fn bound_state_outputs_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small(dir.path(), false);
    run(&cfg, Stage::All).unwrap();
    let p = |n: &str| dir.path().join(n);

    let orbitals: Vec<OrbitalRow> = read_rows(&p("orbitals.csv")).unwrap();
    assert!(orbitals.iter().all(|o| o.energy >= o.exact_energy - 1e-9));
    let spectrum: Vec<SpectrumRow> = read_rows(&p("spectrum.csv")).unwrap();
    assert!(spectrum.iter().all(|r| r.energy < -2.0));
    // Variational: above the exact nonrelativistic ground state.
    let ground = spectrum.iter().find(|r| r.block == "1Se").unwrap().energy;
    assert!(ground > -2.903725 && ground < -2.85, "{ground}");

    let dens: Vec<DensityRow> = read_rows(&p("densities.csv")).unwrap();
    let meas: Vec<MeasureRow> = read_rows(&p("measures.csv")).unwrap();
    let ent: Vec<EntanglementRow> = read_rows(&p("entanglement.csv")).unwrap();
    assert_eq!(dens.len(), spectrum.len());
    assert_eq!(meas.len(), spectrum.len());
    assert_eq!(ent.len(), spectrum.len());
    for d in &dens {
        assert!((d.pair_normalization - 1.0).abs() < 1e-6);
        let stem = format!("density/{}_{}", d.block, d.state);
        let m = read_matrix(&p(&format!("{stem}_pair.csv"))).unwrap();
        assert_eq!(m.len(), cfg.density.pair_points);
        // Relative to the peak: triplets vanish on the diagonal.
        let peak = m.iter().flatten().fold(0.0f64, |a, &v| a.max(v.abs()));
        for i in 0..m.len() {
            assert_eq!(m[i].len(), m.len());
            for j in 0..i {
                assert!((m[i][j] - m[j][i]).abs() <= 1e-12 * peak, "{stem} ({i},{j})");
            }
        }
        let side: serde_json::Value = serde_json::from_str(&fs::read_to_string(p(&format!("{stem}_pair.json"))).unwrap()).unwrap();
        assert_eq!(side["block"], d.block);
        assert_eq!(side["r1"].as_array().unwrap().len(), m.len());
        let radial: Vec<RadialRow> = read_rows(&p(&format!("{stem}_radial.csv"))).unwrap();
        assert!(radial.windows(2).all(|w| w[0].r < w[1].r));
    }
}

#[test]
fn csv_rows_round_trip_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.csv");
    let rows = vec![
        MeasureRow {
            block: "1Se".into(),
            state: 0,
            energy: -0.778_770_812_345_678_9,
            shannon: 1.0 / 3.0,
            fisher: 1e-300,
            k: Some(-1),
            t: Some(0),
            a: Some(1),
            n2: Some(3),
            fisher_dropped_mass: 0.0,
        },
        MeasureRow {
            block: "3Po".into(),
            state: 7,
            energy: f64::MIN_POSITIVE,
            shannon: -2.5e-17,
            fisher: 123456.789,
            k: None,
            t: None,
            a: None,
            n2: None,
            fisher_dropped_mass: 3.2e-12,
        },
    ];
    write_rows(&p, &rows).unwrap();
    assert_eq!(read_rows::<MeasureRow>(&p).unwrap(), rows);

    let values: Vec<f64> = (0..12).map(|i| (i as f64).sqrt() * 1e-7).collect();
    write_matrix(&p, 4, &values).unwrap();
    let back: Vec<f64> = read_matrix(&p).unwrap().concat();
    assert_eq!(back, values);
}

#[test]
fn resonance_run_writes_one_row_per_resonance() {
    let dir = tempfile::tempdir().unwrap();
    // The bundled table lists more 1Se states than this small basis holds.
    let mut cfg = small(dir.path(), true);
    let e = run(&cfg, Stage::Resonances).unwrap_err().to_string();
    assert!(e.starts_with("resonances:") && e.contains("1Se"), "{e}");
    let empty = dir.path().join("none.csv");
    fs::write(&empty, "block,K,T,A,n1,n2,energy\n").unwrap();
    cfg.labels = Some(empty);
    run(&cfg, Stage::All).unwrap();
    let res: Vec<ResonanceRow> = read_rows(&dir.path().join("resonances.csv")).unwrap();
    let meas: Vec<MeasureRow> = read_rows(&dir.path().join("measures.csv")).unwrap();
    assert!(!res.is_empty());
    assert!(res.iter().all(|r| r.energy > -2.0 && r.energy < -0.5 && r.k.is_none()));
    for block in ["1Se", "3Se", "1Po"] {
        let n = res.iter().filter(|r| r.block == block).count();
        assert!(n > 0, "{block}");
        assert_eq!(meas.iter().filter(|r| r.block == block).count(), n);
    }
    let svg = fs::read_to_string(dir.path().join("measures_shannon.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("1Se"));
}

#[test]
fn empty_block_list_is_a_noop_with_notice() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = small(dir.path(), false);
    cfg.ci.blocks.clear();
    let report = run(&cfg, Stage::All).unwrap();
    assert!(report.notices.iter().any(|n| n.contains("no symmetry blocks")));
    let names: Vec<String> = report
        .files
        .iter()
        .map(|f| f.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    assert!(!names.iter().any(|n| n.starts_with("spectrum") || n.starts_with("densities")), "{names:?}");
}

#[test]
fn resonances_stage_requires_q_projection() {
    let dir = tempfile::tempdir().unwrap();
    let e = run(&small(dir.path(), false), Stage::Resonances).unwrap_err().to_string();
    assert!(e.starts_with("resonances:") && e.contains("q_projected"), "{e}");
}

#[test]
fn failures_carry_their_stage() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let e = run(&small(&blocker, false), Stage::Orbitals).unwrap_err().to_string();
    assert!(e.starts_with("output:"), "{e}");

    let mut cfg = small(dir.path(), true);
    cfg.labels = Some(dir.path().join("missing.csv"));
    let e = run(&cfg, Stage::Resonances).unwrap_err().to_string();
    assert!(e.starts_with("resonances:"), "{e}");

    let mut cfg = small(dir.path(), false);
    cfg.charge = 0.0;
    let e = run(&cfg, Stage::Orbitals).unwrap_err().to_string();
    assert!(e.starts_with("config:"), "{e}");
}

#[test]
fn delta_demo_stands_alone() {
    let dir = tempfile::tempdir().unwrap();
    let report = run(&small(dir.path(), false), Stage::DeltaDemo).unwrap();
    assert_eq!(report.files.len(), 2);
    let rows: Vec<DeltaRow> = read_rows(&dir.path().join("delta.csv")).unwrap();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| (r.transmission + r.reflection - 1.0).abs() < 1e-12));
}
