use std::path::PathBuf;

use twoelec::density::{diagonal_symmetry_diagnostic, pair_density, DiagonalCharacter, ProductAmplitudes, RadialGrid};
use twoelec::labels::{attach_labels, bundled, LabelTable};
use twoelec::pipeline::{compute_orbitals, compute_spectra, RunConfig};

fn preset(name: &str) -> RunConfig {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name);
    RunConfig::load(&p).unwrap()
}

#[test]
fn s_resonances_take_the_bundled_labels() {
    let cfg = preset("resonances-S.toml");
    let orbitals = compute_orbitals(&cfg).unwrap();
    let runs = compute_spectra(&cfg, &orbitals).unwrap();
    let table = bundled();
    let grid = RadialGrid::plot_default(&orbitals).unwrap();
    for run in &runs {
        let energies: Vec<f64> = run.selected.iter().map(|&i| run.spectrum.states[i].energy).collect();
        let diagonal: Vec<DiagonalCharacter> = run
            .selected
            .iter()
            .map(|&i| {
                let amp = ProductAmplitudes::new(&run.spectrum.basis, &run.spectrum.states[i], &orbitals).unwrap();
                diagonal_symmetry_diagnostic(&pair_density(&amp, &orbitals, &grid, &grid).unwrap())
            })
            .collect();
        let labeled = attach_labels(run.symmetry, &energies, &table, Some(&diagonal)).unwrap();
        let n_labels = table.block(run.symmetry).len();
        let taken: Vec<usize> = labeled.iter().filter(|s| s.label.is_some()).map(|s| s.index).collect();

        if run.symmetry.to_string() == "1Se" {
            // Two series of five fill the ten lowest states.
            assert_eq!(taken, (0..10).collect::<Vec<_>>());
            let mut series: Vec<_> = labeled.iter().filter_map(|s| s.label.map(|l| l.series())).collect();
            series.sort_unstable();
            series.dedup();
            assert_eq!(series.len(), 2);
        } else {
            assert_eq!(taken.len(), n_labels);
            for s in labeled.iter().filter(|s| s.label.is_some_and(|l| l.a == -1)) {
                assert_eq!(diagonal[s.index], DiagonalCharacter::Node, "state {}", s.index);
                assert_eq!(s.a_consistent, Some(true));
            }
        }
        assert!(labeled.iter().all(|s| !s.off_position), "{}", run.symmetry);
    }
}

#[test]
fn empty_table_leaves_states_unlabeled() {
    let sym = "3Po".parse().unwrap();
    let energies = [-0.76, -0.58, -0.54];
    let out = attach_labels(sym, &energies, &LabelTable::default(), None).unwrap();
    assert_eq!(out.len(), 3);
    assert!(out.iter().all(|s| s.label.is_none() && s.a_consistent.is_none() && !s.ambiguous));
}

#[test]
fn label_files_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("labels.csv");
    std::fs::write(&p, twoelec::labels::BUNDLED_LABELS).unwrap();
    assert_eq!(LabelTable::load(&p).unwrap(), bundled());

    std::fs::write(&p, "block,K,T,A,n1,n2,energy\n1Se,1,0,1,2,2\n").unwrap();
    let e = LabelTable::load(&p).unwrap_err().to_string();
    assert!(e.contains("labels.csv:2") && e.contains("7 columns"), "{e}");
}

#[test]
fn interleaved_series_are_flagged() {
    let text = "1Po,0,1,1,2,2,-0.6000\n1Po,1,0,-1,2,3,-0.5995\n1Po,-1,0,0,2,3,-0.5000\n";
    let table = LabelTable::parse(text, "t").unwrap();
    let out = attach_labels("1Po".parse().unwrap(), &[-0.6001, -0.5996, -0.55, -0.5002], &table, None).unwrap();
    let flagged: Vec<bool> = out.iter().map(|s| s.ambiguous).collect();
    assert_eq!(flagged, [true, true, false, false]);
    assert!(out[2].label.is_none());
    assert_eq!(out[3].label.unwrap().n2, 3);
}
