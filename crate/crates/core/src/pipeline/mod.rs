//! Configuration-driven runs: orbitals, CI spectra, densities, information
//! and entanglement measures, written as CSV with SVG previews.

mod config;
pub mod export;
pub mod svg;

use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;

pub use config::{BasisConfig, CiConfig, DeltaDemoConfig, DensityConfig, RunConfig};
use export::*;

use crate::ci::{assemble_and_diagonalize, feshbach_spectrum, ConfigurationBasis, SlaterCache, Spectrum, Symmetry};
use crate::delta::double_delta_transmission;
use crate::density::{
    diagonal_symmetry_diagnostic, one_particle_density, pair_density, pair_density_on_quadrature, DiagonalCharacter,
    ProductAmplitudes, RadialGrid,
};
use crate::entanglement::entanglement_report;
use crate::error::{Error, Result};
use crate::info::{fisher_information, shannon_entropy};
use crate::labels::{attach_labels, bundled, KTLabel, LabelTable, LabeledState};
use crate::orbitals::{analytic_hydrogen_energy, OrbitalSet};

/// What a run produces; [`Stage::All`] runs every stage that applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Orbitals,
    Spectrum,
    Resonances,
    Density,
    Measures,
    Entanglement,
    DeltaDemo,
    All,
}

impl Stage {
    fn wants(self, other: Stage) -> bool {
        self == other || self == Stage::All
    }
}

/// Files written by a run plus anything worth telling the user.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub notices: Vec<String>,
}

/// Eigenstates of one block and the ones kept for analysis: bound states
/// below the first threshold, or Q-space resonances below the second.
pub struct BlockRun {
    pub symmetry: Symmetry,
    pub spectrum: Spectrum,
    pub selected: Vec<usize>,
}

/// Computed data for the selected states of one block.
struct BlockAnalysis {
    run: BlockRun,
    amplitudes: Vec<ProductAmplitudes>,
    diagonal: Option<Vec<DiagonalCharacter>>,
    labels: Vec<LabeledState>,
}

impl BlockAnalysis {
    fn label(&self, i: usize) -> Option<KTLabel> {
        self.labels.get(i).and_then(|l| l.label)
    }

    fn energy(&self, i: usize) -> f64 {
        self.run.spectrum.states[self.run.selected[i]].energy
    }
}

pub fn compute_orbitals(cfg: &RunConfig) -> Result<OrbitalSet> {
    let basis = cfg.build_basis()?;
    OrbitalSet::compute(basis, cfg.charge, cfg.ci.l_max, cfg.basis.quadrature_points)
}

/// Diagonalize every requested block, in parallel.
pub fn compute_spectra(cfg: &RunConfig, orbitals: &OrbitalSet) -> Result<Vec<BlockRun>> {
    let cache = SlaterCache::new(orbitals)?;
    let n_max = cfg.n_max();
    cfg.ci
        .blocks
        .par_iter()
        .map(|&sym| {
            let basis = ConfigurationBasis::build(sym, &sym.channels(cfg.ci.l_max), &n_max, orbitals, cfg.ci.q_projected)?;
            if cfg.ci.q_projected {
                let f = feshbach_spectrum(basis, orbitals, &cache)?;
                let selected = (0..f.resonances().len()).collect();
                Ok(BlockRun {
                    symmetry: sym,
                    spectrum: f.spectrum,
                    selected,
                })
            } else {
                let spectrum = assemble_and_diagonalize(basis, orbitals, &cache)?;
                let threshold = -cfg.charge * cfg.charge / 2.0;
                let selected = (0..spectrum.states.len())
                    .take_while(|&i| spectrum.states[i].energy < threshold)
                    .collect();
                Ok(BlockRun {
                    symmetry: sym,
                    spectrum,
                    selected,
                })
            }
        })
        .collect()
}

/// Label table for the run: the configured file, else the bundled helium
/// table when `Z = 2`, else nothing.
pub fn label_table(cfg: &RunConfig, notices: &mut Vec<String>) -> Result<LabelTable> {
    match &cfg.labels {
        Some(p) => LabelTable::load(p),
        None if cfg.charge == 2.0 => Ok(bundled()),
        None => {
            notices.push(format!("no label table for Z = {}; resonances stay unlabeled", cfg.charge));
            Ok(LabelTable::default())
        }
    }
}

fn analyze(
    cfg: &RunConfig,
    orbitals: &OrbitalSet,
    runs: Vec<BlockRun>,
    table: Option<&LabelTable>,
    with_diagonal: bool,
) -> Result<Vec<BlockAnalysis>> {
    let grid = RadialGrid::plot_default(orbitals)?;
    runs.into_par_iter()
        .map(|run| {
            let amplitudes = run
                .selected
                .iter()
                .map(|&i| ProductAmplitudes::new(&run.spectrum.basis, &run.spectrum.states[i], orbitals))
                .collect::<Result<Vec<_>>>()?;
            let diagonal = if with_diagonal {
                Some(
                    amplitudes
                        .iter()
                        .map(|a| Ok(diagonal_symmetry_diagnostic(&pair_density(a, orbitals, &grid, &grid)?)))
                        .collect::<Result<Vec<_>>>()?,
                )
            } else {
                None
            };
            let labels = match table {
                Some(t) if cfg.ci.q_projected => {
                    let energies: Vec<f64> = run.selected.iter().map(|&i| run.spectrum.states[i].energy).collect();
                    attach_labels(run.symmetry, &energies, t, diagonal.as_deref())?
                }
                _ => Vec::new(),
            };
            Ok(BlockAnalysis {
                run,
                amplitudes,
                diagonal,
                labels,
            })
        })
        .collect()
}

struct Writer {
    out: PathBuf,
    report: RunReport,
}

impl Writer {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn rows<T: serde::Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let p = self.path(name);
        write_rows(&p, rows)?;
        self.report.files.push(p);
        Ok(())
    }

    fn text(&mut self, name: &str, text: &str) -> Result<()> {
        let p = self.path(name);
        if let Some(d) = p.parent() {
            fs::create_dir_all(d)?;
        }
        fs::write(&p, text)?;
        self.report.files.push(p);
        Ok(())
    }
}

/// Run one stage (with whatever it depends on) and write its outputs under
/// `cfg.output`.
pub fn run(cfg: &RunConfig, stage: Stage) -> Result<RunReport> {
    cfg.validate().map_err(|e| e.in_stage("config"))?;
    let mut w = Writer {
        out: cfg.output.clone(),
        report: RunReport::default(),
    };
    fs::create_dir_all(&w.out).map_err(|e| Error::from(e).in_stage("output"))?;

    if stage.wants(Stage::DeltaDemo) {
        delta_demo(cfg, &mut w)?;
        if stage == Stage::DeltaDemo {
            return Ok(w.report);
        }
    }

    let orbitals = compute_orbitals(cfg).map_err(|e| e.in_stage("orbitals"))?;
    if stage.wants(Stage::Orbitals) {
        write_orbitals(&orbitals, &mut w).map_err(|e| e.in_stage("output"))?;
    }
    if stage == Stage::Orbitals {
        return Ok(w.report);
    }
    if cfg.ci.blocks.is_empty() {
        w.report.notices.push("no symmetry blocks requested; nothing else to do".into());
        return Ok(w.report);
    }
    if stage == Stage::Resonances && !cfg.ci.q_projected {
        return Err(Error::Config("the resonances stage needs ci.q_projected = true".into()).in_stage("resonances"));
    }

    let runs = compute_spectra(cfg, &orbitals).map_err(|e| e.in_stage("spectrum"))?;
    if stage.wants(Stage::Spectrum) {
        write_spectra(&runs, &mut w).map_err(|e| e.in_stage("output"))?;
    }
    if stage == Stage::Spectrum {
        return Ok(w.report);
    }

    let table = if cfg.ci.q_projected {
        Some(label_table(cfg, &mut w.report.notices).map_err(|e| e.in_stage("resonances"))?)
    } else {
        None
    };
    let with_diagonal = matches!(stage, Stage::Resonances | Stage::Density | Stage::All);
    let blocks = analyze(cfg, &orbitals, runs, table.as_ref(), with_diagonal).map_err(|e| {
        e.in_stage(if cfg.ci.q_projected { "resonances" } else { "density" })
    })?;

    if cfg.ci.q_projected && stage.wants(Stage::Resonances) {
        write_resonances(&blocks, &mut w).map_err(|e| e.in_stage("output"))?;
    }
    if stage.wants(Stage::Density) {
        densities(cfg, &orbitals, &blocks, &mut w)?;
    }
    if stage.wants(Stage::Measures) {
        measures(&orbitals, &blocks, &mut w)?;
    }
    if stage.wants(Stage::Entanglement) {
        entanglement(&blocks, &mut w)?;
    }
    Ok(w.report)
}

fn write_orbitals(orbitals: &OrbitalSet, w: &mut Writer) -> Result<()> {
    let rows = orbitals
        .iter()
        .map(|o| {
            Ok(OrbitalRow {
                l: o.l,
                n: o.n,
                energy: o.energy,
                exact_energy: analytic_hydrogen_energy(o.n, orbitals.charge())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    w.rows("orbitals.csv", &rows)
}

fn write_spectra(runs: &[BlockRun], w: &mut Writer) -> Result<()> {
    let mut rows = Vec::new();
    let mut series = Vec::new();
    for r in runs {
        let mut pts = Vec::new();
        for (k, &i) in r.selected.iter().enumerate() {
            let e = r.spectrum.states[i].energy;
            rows.push(SpectrumRow {
                block: r.symmetry.to_string(),
                state: k,
                energy: e,
                configurations: r.spectrum.basis.len(),
            });
            pts.push((k as f64, e));
        }
        series.push((r.symmetry.to_string(), pts));
    }
    w.rows("spectrum.csv", &rows)?;
    w.text("spectrum.svg", &svg::scatter("Spectrum", "state", "energy (hartree)", &series))
}

fn write_resonances(blocks: &[BlockAnalysis], w: &mut Writer) -> Result<()> {
    let mut rows = Vec::new();
    for b in blocks {
        for (k, st) in b.labels.iter().enumerate() {
            let l = st.label;
            rows.push(ResonanceRow {
                block: b.run.symmetry.to_string(),
                state: k,
                energy: st.energy,
                diagonal: b.diagonal.as_ref().map_or(String::new(), |d| d[k].to_string()),
                k: l.map(|l| l.k),
                t: l.map(|l| l.t),
                a: l.map(|l| l.a),
                n1: l.map(|l| l.n1),
                n2: l.map(|l| l.n2),
                label_energy: l.map(|l| l.energy),
                ambiguous: st.ambiguous,
                off_position: st.off_position,
                a_consistent: st.a_consistent,
            });
        }
    }
    w.rows("resonances.csv", &rows)
}

fn densities(cfg: &RunConfig, orbitals: &OrbitalSet, blocks: &[BlockAnalysis], w: &mut Writer) -> Result<()> {
    let plot = RadialGrid::plot_default(orbitals).map_err(|e| e.in_stage("density"))?;
    let d = &cfg.density;
    let mesh = RadialGrid::exponential(d.pair_r_min, d.pair_r_max, d.pair_points).map_err(|e| e.in_stage("density"))?;

    struct StateOut {
        row: DensityRow,
        radial: Vec<RadialRow>,
        pair: Vec<f64>,
    }
    let computed: Vec<Vec<StateOut>> = blocks
        .par_iter()
        .map(|b| {
            (0..b.amplitudes.len())
                .map(|i| {
                    let amps = &b.amplitudes[i];
                    let norm = pair_density_on_quadrature(amps, orbitals)?
                        .normalization()
                        .unwrap_or(f64::NAN);
                    let one = one_particle_density(amps, orbitals)?;
                    let values = one.tabulate(&plot.nodes)?;
                    let pair = pair_density(amps, orbitals, &mesh, &mesh)?;
                    Ok(StateOut {
                        row: DensityRow {
                            block: b.run.symmetry.to_string(),
                            state: i,
                            energy: b.energy(i),
                            pair_normalization: norm,
                            one_particle_normalization: one.normalization()?,
                            rho_nucleus: one.at_nucleus()?,
                            diagonal: b.diagonal.as_ref().map_or(String::new(), |d| d[i].to_string()),
                        },
                        radial: plot.nodes.iter().zip(values).map(|(&r, rho)| RadialRow { r, rho }).collect(),
                        pair: pair.values,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("density"))?;

    let mut rows = Vec::new();
    for block in computed {
        for s in block {
            let stem = format!("density/{}_{}", s.row.block, s.row.state);
            (|| -> Result<()> {
                w.rows(&format!("{stem}_radial.csv"), &s.radial)?;
                let p = w.path(&format!("{stem}_pair.csv"));
                write_matrix(&p, mesh.len(), &s.pair)?;
                w.report.files.push(p);
                let p = w.path(&format!("{stem}_pair.json"));
                write_json(
                    &p,
                    &PairSidecar {
                        block: s.row.block.clone(),
                        state: s.row.state,
                        energy: s.row.energy,
                        r1: mesh.nodes.clone(),
                        r2: mesh.nodes.clone(),
                        diagonal: s.row.diagonal.clone(),
                    },
                )?;
                w.report.files.push(p);
                let title = format!("{} state {} pair density", s.row.block, s.row.state);
                w.text(
                    &format!("{stem}_pair.svg"),
                    &svg::heatmap(&title, "r2", "r1", &mesh.nodes, &mesh.nodes, &s.pair),
                )
            })()
            .map_err(|e| e.in_stage("output"))?;
            rows.push(s.row);
        }
    }
    w.rows("densities.csv", &rows).map_err(|e| e.in_stage("output"))
}

fn series_name(sym: Symmetry, label: Option<KTLabel>) -> String {
    match label {
        Some(l) => {
            let a = match l.a {
                1 => "+",
                -1 => "-",
                _ => "0",
            };
            format!("{sym} ({},{}){a}", l.k, l.t)
        }
        None => sym.to_string(),
    }
}

fn push_point(series: &mut Vec<(String, Vec<(f64, f64)>)>, name: String, p: (f64, f64)) {
    match series.iter_mut().find(|s| s.0 == name) {
        Some(s) => s.1.push(p),
        None => series.push((name, vec![p])),
    }
}

fn measures(orbitals: &OrbitalSet, blocks: &[BlockAnalysis], w: &mut Writer) -> Result<()> {
    let rows: Vec<MeasureRow> = blocks
        .par_iter()
        .map(|b| {
            (0..b.amplitudes.len())
                .map(|i| {
                    let d = one_particle_density(&b.amplitudes[i], orbitals)?;
                    let fisher = fisher_information(&d)?;
                    let l = b.label(i);
                    Ok(MeasureRow {
                        block: b.run.symmetry.to_string(),
                        state: i,
                        energy: b.energy(i),
                        shannon: shannon_entropy(&d)?,
                        fisher: fisher.value,
                        k: l.map(|l| l.k),
                        t: l.map(|l| l.t),
                        a: l.map(|l| l.a),
                        n2: l.map(|l| l.n2),
                        fisher_dropped_mass: fisher.dropped_mass,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("measures"))?
        .into_iter()
        .flatten()
        .collect();

    let (mut shannon, mut fisher) = (Vec::new(), Vec::new());
    for b in blocks {
        for (i, r) in rows.iter().filter(|r| r.block == b.run.symmetry.to_string()).enumerate() {
            let name = series_name(b.run.symmetry, b.label(i));
            push_point(&mut shannon, name.clone(), (r.energy, r.shannon));
            push_point(&mut fisher, name, (r.energy, r.fisher));
        }
    }
    (|| -> Result<()> {
        w.rows("measures.csv", &rows)?;
        w.text("measures_shannon.svg", &svg::scatter("Shannon entropy", "energy (hartree)", "S", &shannon))?;
        w.text("measures_fisher.svg", &svg::scatter("Fisher information", "energy (hartree)", "I", &fisher))
    })()
    .map_err(|e| e.in_stage("output"))
}

fn entanglement(blocks: &[BlockAnalysis], w: &mut Writer) -> Result<()> {
    let rows: Vec<EntanglementRow> = blocks
        .par_iter()
        .map(|b| {
            (0..b.amplitudes.len())
                .map(|i| {
                    let rep = entanglement_report(&b.amplitudes[i])?;
                    let l = b.label(i);
                    Ok(EntanglementRow {
                        block: b.run.symmetry.to_string(),
                        state: i,
                        energy: b.energy(i),
                        linear_entropy: rep.linear_entropy,
                        von_neumann_entropy: rep.von_neumann_entropy,
                        slater_rank: rep.slater_rank,
                        k: l.map(|l| l.k),
                        t: l.map(|l| l.t),
                        a: l.map(|l| l.a),
                        n2: l.map(|l| l.n2),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("entanglement"))?
        .into_iter()
        .flatten()
        .collect();

    let mut series = Vec::new();
    for b in blocks {
        for (i, r) in rows.iter().filter(|r| r.block == b.run.symmetry.to_string()).enumerate() {
            push_point(&mut series, series_name(b.run.symmetry, b.label(i)), (r.energy, r.linear_entropy));
        }
    }
    (|| -> Result<()> {
        w.rows("entanglement.csv", &rows)?;
        w.text("entanglement.svg", &svg::scatter("Linear entropy", "energy (hartree)", "S_L", &series))
    })()
    .map_err(|e| e.in_stage("output"))
}

/// Wavenumbers of the demo scan, geometric from `k_min` to `k_max`.
pub fn delta_grid(cfg: &DeltaDemoConfig) -> Vec<f64> {
    let n = cfg.points;
    let step = (cfg.k_max / cfg.k_min).ln() / (n - 1) as f64;
    let mut k: Vec<f64> = (0..n).map(|i| cfg.k_min * (step * i as f64).exp()).collect();
    k[n - 1] = cfg.k_max;
    k
}

fn delta_demo(cfg: &RunConfig, w: &mut Writer) -> Result<()> {
    let d = &cfg.delta_demo;
    let rows = delta_grid(d)
        .into_iter()
        .map(|k| {
            let s = double_delta_transmission(k, d.a, d.a0)?;
            Ok(DeltaRow {
                k,
                transmission: s.transmission,
                reflection: s.reflection,
                t_re: s.t.re,
                t_im: s.t.im,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_stage("delta-demo"))?;
    let pts = vec![("T".to_string(), rows.iter().map(|r| (r.k, r.transmission)).collect())];
    (|| -> Result<()> {
        w.rows("delta.csv", &rows)?;
        w.text(
            "delta.svg",
            &svg::scatter("Double delta transmission", "k", "T", &pts),
        )
    })()
    .map_err(|e| e.in_stage("output"))
}
