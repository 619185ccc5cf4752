//! The iteration driver: `A^(k+1) = S_k⁻¹ R_k* A^(k) R_k S_k` with pivots
//! taken cyclically from a [`PivotOrdering`].
//!
//! Each step touches rows and columns `p`, `q` only, so a step costs `O(n)`
//! unless tracing is on; tracing adds `O(n²)` per step to keep `C(A^(k))`
//! current.

use num_complex::Complex64;

use crate::diagnostics::TraceRecord;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::pivot::{PivotCursor, PivotOrdering};
use crate::transforms::{
    left_in_place, right_in_place, rotation_from_pivot, shear_for_pivot, two_sided_in_place, Mode, Rotation,
    Shear, ShearWorkspace,
};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    /// Stop once a sweep changes `off(B)` by less than this.
    pub tol_sweep: f64,
    /// Stop once `off(B) / ‖A^(0)‖_F` falls below this.
    pub tol_floor: f64,
    pub max_sweeps: usize,
    pub mode: Mode,
    /// Keep the real parts of the diagonal in decreasing order.
    pub enforce_order: bool,
    /// Accumulate `T = T_0 T_1 ...` and its inverse.
    pub accumulate: bool,
    /// Record a [`TraceRecord`] per step.
    pub trace: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_sweep: 1e-8,
            tol_floor: 1e-14,
            max_sweeps: 100,
            mode: Mode::Complex,
            enforce_order: false,
            accumulate: false,
            trace: false,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_sweep > 0.0 && self.tol_sweep.is_finite()) {
            return Err(Error::Config(format!("tol_sweep must be positive, got {}", self.tol_sweep)));
        }
        if !(self.tol_floor > 0.0 && self.tol_floor.is_finite()) {
            return Err(Error::Config(format!("tol_floor must be positive, got {}", self.tol_floor)));
        }
        if self.max_sweeps == 0 {
            return Err(Error::Config("max_sweeps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Everything one step computed.
#[derive(Clone, Debug)]
pub struct StepSummary {
    pub k: usize,
    /// 1-based sweep containing this step.
    pub sweep: usize,
    pub p: usize,
    pub q: usize,
    pub rotation: Rotation,
    pub shear: Shear,
    pub workspace: ShearWorkspace,
    pub delta_pred: f64,
    /// `‖A^(k)‖² - ‖A^(k+1)‖²`, summed over the entries the step changed.
    pub delta_achieved: f64,
    pub fro_sq_before: f64,
}

/// Snapshots handed to an [`Observer`]; `before` and `rotated` are present
/// only when the observer asks for them.
pub struct StepEvent<'a> {
    pub summary: &'a StepSummary,
    pub before: Option<&'a ComplexMatrix>,
    pub rotated: Option<&'a ComplexMatrix>,
    pub after: &'a ComplexMatrix,
}

/// State at the end of a sweep (sweep 0 is the starting matrix).
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub sweep: usize,
    pub steps: usize,
    pub off_a: f64,
    pub off_b: f64,
    pub norm_c: f64,
    pub fro_a: f64,
    /// `|trace(A) - trace(A^(0))|`.
    pub trace_drift: f64,
}

pub trait Observer {
    fn wants_snapshots(&self) -> bool {
        false
    }

    fn on_step(&mut self, _event: &StepEvent<'_>) {}

    fn on_sweep(&mut self, _record: &SweepRecord, _a: &ComplexMatrix) {}
}

struct NoObserver;

impl Observer for NoObserver {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// `|off(B)` change over a sweep`|` fell below `tol_sweep`.
    SweepChange,
    /// `off(B) / ‖A^(0)‖_F` fell below `tol_floor`.
    Floor,
    MaxSweeps,
}

impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::SweepChange => "sweep_change",
            StopReason::Floor => "floor",
            StopReason::MaxSweeps => "max_sweeps",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub matrix: ComplexMatrix,
    pub converged: bool,
    pub stop_reason: StopReason,
    pub sweeps: usize,
    pub steps: usize,
    pub trace: Vec<TraceRecord>,
    pub sweep_log: Vec<SweepRecord>,
    pub transform: Option<ComplexMatrix>,
    pub transform_inv: Option<ComplexMatrix>,
    pub initial_norm: f64,
    pub final_off_b: f64,
    pub final_norm_c: f64,
}

impl SolverResult {
    /// `‖T⁻¹ A^(0) T - A_final‖_F`, when transforms were accumulated.
    pub fn transform_residual(&self, a0: &ComplexMatrix) -> Option<f64> {
        let t = self.transform.as_ref()?;
        let t_inv = self.transform_inv.as_ref()?;
        Some(t_inv.matmul(a0).matmul(t).sub(&self.matrix).frobenius_norm())
    }
}

/// Frobenius norm of the off-diagonal part of `(A + A*)/2`, without forming it.
pub fn off_b(a: &ComplexMatrix) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for j in 1..n {
        for i in 0..j {
            s += (a[(i, j)] + a[(j, i)].conj()).norm_sqr();
        }
    }
    // each unordered pair contributes twice |(a_ij + conj a_ji)/2|²
    (0.5 * s).sqrt()
}

/// `‖before‖²_F - ‖after‖²_F`.
pub fn delta_achieved(before: &ComplexMatrix, after: &ComplexMatrix) -> f64 {
    before.frobenius_norm_sq() - after.frobenius_norm_sq()
}

/// Entries in rows and columns `p`, `q`, each listed once.
fn cross_positions(n: usize, p: usize, q: usize) -> impl Iterator<Item = (usize, usize)> {
    let rows = (0..n).flat_map(move |j| [(p, j), (q, j)]);
    let cols = (0..n).filter(move |&i| i != p && i != q).flat_map(move |i| [(i, p), (i, q)]);
    rows.chain(cols)
}

fn cross_sq(a: &ComplexMatrix, p: usize, q: usize) -> f64 {
    cross_positions(a.n(), p, q).map(|ij| a[ij].norm_sqr()).sum()
}

pub struct SolverState {
    a: ComplexMatrix,
    opts: SolverOptions,
    cursor: PivotCursor,
    k: usize,
    initial_norm: f64,
    initial_trace: Complex64,
    fro_sq: f64,
    commutator: Option<ComplexMatrix>,
    t_acc: Option<ComplexMatrix>,
    t_inv_acc: Option<ComplexMatrix>,
    trace: Vec<TraceRecord>,
}

impl SolverState {
    pub fn new(a0: ComplexMatrix, ordering: PivotOrdering, opts: SolverOptions) -> Result<Self> {
        opts.validate()?;
        let n = a0.n();
        if n < 2 {
            return Err(Error::Shape { rows: n, cols: n, min: 2 });
        }
        if ordering.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: ordering.n(),
            });
        }
        if let Err(v) = ordering.validate() {
            return Err(Error::InvalidOrdering(v));
        }
        if !a0.is_finite() {
            return Err(Error::NonFinite { step: 0 });
        }
        if opts.mode == Mode::Real {
            if let Some((row, col)) = a0.first_non_real() {
                return Err(Error::NotReal {
                    row,
                    col,
                    imag: a0[(row, col)].im,
                });
            }
        }
        let fro_sq = a0.frobenius_norm_sq();
        Ok(Self {
            commutator: opts.trace.then(|| a0.commutator()),
            t_acc: opts.accumulate.then(|| ComplexMatrix::identity(n)),
            t_inv_acc: opts.accumulate.then(|| ComplexMatrix::identity(n)),
            initial_norm: fro_sq.sqrt(),
            initial_trace: a0.trace(),
            fro_sq,
            a: a0,
            opts,
            cursor: PivotCursor::new(ordering),
            k: 0,
            trace: Vec::new(),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn options(&self) -> &SolverOptions {
        &self.opts
    }

    pub fn initial_norm(&self) -> f64 {
        self.initial_norm
    }

    pub fn trace_records(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn transform(&self) -> Option<&ComplexMatrix> {
        self.t_acc.as_ref()
    }

    pub fn transform_inv(&self) -> Option<&ComplexMatrix> {
        self.t_inv_acc.as_ref()
    }

    pub fn pairs_per_sweep(&self) -> usize {
        self.cursor.ordering().len()
    }

    pub fn step(&mut self) -> Result<StepSummary> {
        self.step_observed(&mut NoObserver)
    }

    pub fn step_observed(&mut self, observer: &mut dyn Observer) -> Result<StepSummary> {
        let n = self.a.n();
        let k = self.k;
        let sweep = k / self.pairs_per_sweep() + 1;
        let (p, q) = self.cursor.next_pivot();
        let mode = self.opts.mode;
        let snapshots = observer.wants_snapshots();

        let b_pq = (self.a[(p, q)] + self.a[(q, p)].conj()) * 0.5;
        let rotation = rotation_from_pivot(
            p,
            q,
            self.a[(p, p)].re,
            self.a[(q, q)].re,
            b_pq,
            mode,
            self.opts.enforce_order,
        );

        let before = snapshots.then(|| self.a.clone());
        let cross_before = cross_sq(&self.a, p, q);

        let r_block = rotation.block();
        let r_adj = [
            [r_block[0][0].conj(), r_block[1][0].conj()],
            [r_block[0][1].conj(), r_block[1][1].conj()],
        ];
        two_sided_in_place(&mut self.a, p, q, &r_adj, &r_block);
        if let Some(c) = self.commutator.as_mut() {
            // C(R* A R) = R* C(A) R
            two_sided_in_place(c, p, q, &r_adj, &r_block);
        }
        let rotated = snapshots.then(|| self.a.clone());

        let (shear, workspace) = shear_for_pivot(&self.a, p, q, mode, self.fro_sq)?;
        let tilde_cross: Option<Vec<Complex64>> = self
            .commutator
            .is_some()
            .then(|| cross_positions(n, p, q).map(|ij| self.a[ij]).collect());
        let rotated_for_c = (self.commutator.is_some() && !shear.is_identity()).then(|| self.a.clone());

        if !shear.is_identity() {
            two_sided_in_place(&mut self.a, p, q, &shear.inverse_block(), &shear.block());
        }

        let cross_after = cross_sq(&self.a, p, q);
        if !cross_after.is_finite() {
            return Err(Error::NonFinite { step: k });
        }
        let delta = cross_before - cross_after;
        let fro_sq_before = self.fro_sq;
        self.fro_sq -= delta;

        if let (Some(t), Some(t_inv)) = (self.t_acc.as_mut(), self.t_inv_acc.as_mut()) {
            right_in_place(t, p, q, &r_block);
            right_in_place(t, p, q, &shear.block());
            left_in_place(t_inv, p, q, &r_adj);
            left_in_place(t_inv, p, q, &shear.inverse_block());
        }

        if let (Some(c), Some(a_tilde), Some(old)) = (self.commutator.as_mut(), rotated_for_c, tilde_cross) {
            let e: Vec<(usize, usize, Complex64)> = cross_positions(n, p, q)
                .zip(old)
                .map(|((i, j), o)| (i, j, self.a[(i, j)] - o))
                .filter(|(_, _, d)| *d != Complex64::new(0.0, 0.0))
                .collect();
            commutator_update(c, &self.a, &a_tilde, &e);
        }

        let summary = StepSummary {
            k,
            sweep,
            p,
            q,
            rotation,
            shear,
            workspace,
            delta_pred: shear.delta_pred,
            delta_achieved: delta,
            fro_sq_before,
        };

        if self.opts.trace {
            let norm_c = self.commutator.as_ref().map_or(0.0, |c| c.frobenius_norm());
            self.trace.push(TraceRecord {
                k,
                sweep,
                p,
                q,
                off_a: self.a.off_norm(),
                off_b: off_b(&self.a),
                norm_c,
                fro_a: self.a.frobenius_norm(),
                delta_k: delta,
                c_pq_abs: workspace.c_pq.norm(),
            });
        }

        self.k += 1;
        observer.on_step(&StepEvent {
            summary: &summary,
            before: before.as_ref(),
            rotated: rotated.as_ref(),
            after: &self.a,
        });
        Ok(summary)
    }

    /// Recomputes the incrementally maintained quantities from scratch and
    /// reports the state.
    fn sweep_record(&mut self, sweep: usize) -> SweepRecord {
        self.fro_sq = self.a.frobenius_norm_sq();
        let c = self.a.commutator();
        let norm_c = c.frobenius_norm();
        if self.commutator.is_some() {
            self.commutator = Some(c);
        }
        SweepRecord {
            sweep,
            steps: self.k,
            off_a: self.a.off_norm(),
            off_b: off_b(&self.a),
            norm_c,
            fro_a: self.fro_sq.sqrt(),
            trace_drift: (self.a.trace() - self.initial_trace).norm(),
        }
    }
}

/// `C(A') = C(Ã) + A'E* + EÃ* - A'*E - E*Ã` for `A' = Ã + E`, with `E`
/// given by its nonzero entries.
fn commutator_update(
    c: &mut ComplexMatrix,
    a_next: &ComplexMatrix,
    a_tilde: &ComplexMatrix,
    e: &[(usize, usize, Complex64)],
) {
    let n = c.n();
    for &(r, s, v) in e {
        let vc = v.conj();
        for i in 0..n {
            // A'E*: column r gets a'_{i s} conj(v)
            c[(i, r)] += a_next[(i, s)] * vc;
            // EÃ*: row r gets v conj(ã_{j s})
            c[(r, i)] += v * a_tilde[(i, s)].conj();
            // -A'*E: column s gets -conj(a'_{r i}) v
            c[(i, s)] -= a_next[(r, i)].conj() * v;
            // -E*Ã: row s gets -conj(v) ã_{r j}
            c[(s, i)] -= vc * a_tilde[(r, i)];
        }
    }
}

pub fn run(a0: &ComplexMatrix, ordering: &PivotOrdering, opts: &SolverOptions) -> Result<SolverResult> {
    run_observed(a0, ordering, opts, &mut NoObserver)
}

pub fn run_observed(
    a0: &ComplexMatrix,
    ordering: &PivotOrdering,
    opts: &SolverOptions,
    observer: &mut dyn Observer,
) -> Result<SolverResult> {
    let mut state = SolverState::new(a0.clone(), ordering.clone(), opts.clone())?;
    let per_sweep = state.pairs_per_sweep();
    let initial_norm = state.initial_norm();

    let start = state.sweep_record(0);
    observer.on_sweep(&start, state.matrix());
    let mut prev_off_b = start.off_b;
    let mut prev_fro = start.fro_a;
    let mut sweep_log = vec![start];
    let mut stop = StopReason::MaxSweeps;

    for sweep in 1..=opts.max_sweeps {
        for _ in 0..per_sweep {
            state.step_observed(observer)?;
        }
        let record = state.sweep_record(sweep);
        observer.on_sweep(&record, state.matrix());
        let change = (record.off_b - prev_off_b).abs();
        // off(B) can vanish after every rotation while the skew part is still
        // being removed (always so for n = 2), so a stop also requires the
        // sweep to have left ‖A‖_F essentially unchanged.
        let stationary = prev_fro - record.fro_a < opts.tol_sweep.max(opts.tol_floor * initial_norm);
        prev_off_b = record.off_b;
        prev_fro = record.fro_a;
        let floor_hit = record.off_b < opts.tol_floor * initial_norm;
        sweep_log.push(record);
        if stationary && change < opts.tol_sweep {
            stop = StopReason::SweepChange;
            break;
        }
        if stationary && floor_hit {
            stop = StopReason::Floor;
            break;
        }
    }

    let last = sweep_log.last().cloned().expect("sweep log starts with sweep 0");
    Ok(SolverResult {
        converged: stop != StopReason::MaxSweeps,
        stop_reason: stop,
        sweeps: last.sweep,
        steps: state.k(),
        final_off_b: last.off_b,
        final_norm_c: last.norm_c,
        initial_norm,
        transform: state.t_acc.take(),
        transform_inv: state.t_inv_acc.take(),
        trace: std::mem::take(&mut state.trace),
        matrix: state.a,
        sweep_log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pivot::random_sg_ordering;
    use crate::rng::SeededRng;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_complex(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = SeededRng::new(seed);
        ComplexMatrix::from_fn(n, |_, _| rng.complex())
    }

    #[test]
    fn diagonal_input_is_fixed() {
        let d = ComplexMatrix::from_diag(&[c(3.0, 1.0), c(-1.0, 0.0), c(2.0, -2.0)]);
        let mut state = SolverState::new(d.clone(), PivotOrdering::column(3).unwrap(), SolverOptions::default())
            .unwrap();
        for _ in 0..3 {
            let s = state.step().unwrap();
            assert_eq!(s.delta_achieved, 0.0);
            assert!(s.rotation.is_identity() && s.shear.is_identity());
        }
        assert_eq!(state.matrix(), &d);
        assert_eq!(state.k(), 3);

        let res = run(&d, &PivotOrdering::row(3).unwrap(), &SolverOptions::default()).unwrap();
        assert!(res.converged);
        assert_eq!(res.sweeps, 1);
        assert_eq!(res.matrix, d);
    }

    #[test]
    fn nilpotent_first_step() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let mut state = SolverState::new(a.clone(), PivotOrdering::column(2).unwrap(), SolverOptions::default())
            .unwrap();
        let s = state.step().unwrap();
        assert!(s.delta_achieved > 0.0);
        assert_relative_eq!(s.delta_achieved, s.delta_pred, epsilon = 1e-12);
        assert_relative_eq!(delta_achieved(&a, state.matrix()), s.delta_achieved, epsilon = 1e-12);
        let psi = (-0.25f64).atanh();
        assert_relative_eq!(s.delta_achieved, (1.0 - (4.0 * psi).cosh()) - (4.0 * psi).sinh(), epsilon = 1e-12);
    }

    #[test]
    fn triangular_two_by_two_converges() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, -1.0]]).unwrap();
        let opts = SolverOptions {
            enforce_order: true,
            ..Default::default()
        };
        let res = run(&a, &PivotOrdering::column(2).unwrap(), &opts).unwrap();
        assert!(res.converged);
        assert!(res.final_off_b < 1e-8);
        assert_relative_eq!(res.matrix[(0, 0)].re, 1.0, epsilon = 1e-8);
        assert_relative_eq!(res.matrix[(1, 1)].re, -1.0, epsilon = 1e-8);
    }

    #[test]
    fn hermitian_steps_are_pure_rotations() {
        let h = random_complex(6, 4).hermitian_part();
        let mut state = SolverState::new(h, PivotOrdering::row(6).unwrap(), SolverOptions::default()).unwrap();
        for _ in 0..45 {
            let s = state.step().unwrap();
            assert!(s.shear.sinh_psi.abs() <= 1e-14);
        }
    }

    #[test]
    fn incremental_commutator_tracks_exact() {
        let a = random_complex(7, 21);
        let opts = SolverOptions {
            trace: true,
            max_sweeps: 3,
            ..Default::default()
        };
        let mut state = SolverState::new(a, random_sg_ordering(7, 2, None).unwrap(), opts).unwrap();
        for _ in 0..30 {
            state.step().unwrap();
        }
        let exact = state.matrix().commutator().frobenius_norm();
        let tracked = state.trace_records().last().unwrap().norm_c;
        assert!((exact - tracked).abs() <= 1e-12 * state.initial_norm().powi(2));
    }

    #[test]
    fn accumulated_transform_reproduces_iterate() {
        let a = random_complex(6, 9);
        let opts = SolverOptions {
            accumulate: true,
            ..Default::default()
        };
        let res = run(&a, &PivotOrdering::column(6).unwrap(), &opts).unwrap();
        assert!(res.converged);
        assert!(res.transform_residual(&a).unwrap() <= 1e-8 * a.frobenius_norm());
        let t = res.transform.as_ref().unwrap();
        let prod = t.matmul(res.transform_inv.as_ref().unwrap());
        assert!(prod.sub(&ComplexMatrix::identity(6)).frobenius_norm() <= 1e-8);
    }

    #[test]
    fn real_mode_rejects_complex_input() {
        let a = random_complex(3, 1);
        let opts = SolverOptions {
            mode: Mode::Real,
            ..Default::default()
        };
        assert!(matches!(
            run(&a, &PivotOrdering::column(3).unwrap(), &opts),
            Err(Error::NotReal { .. })
        ));
        assert!(matches!(
            run(&a, &PivotOrdering::column(4).unwrap(), &SolverOptions::default()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bad_options_rejected() {
        let a = ComplexMatrix::identity(2);
        let o = PivotOrdering::column(2).unwrap();
        for opts in [
            SolverOptions {
                tol_sweep: 0.0,
                ..Default::default()
            },
            SolverOptions {
                max_sweeps: 0,
                ..Default::default()
            },
        ] {
            assert!(matches!(run(&a, &o, &opts), Err(Error::Config(_))));
        }
    }

    #[test]
    fn max_sweeps_reported_not_error() {
        let a = random_complex(8, 3);
        let opts = SolverOptions {
            max_sweeps: 1,
            ..Default::default()
        };
        let res = run(&a, &PivotOrdering::column(8).unwrap(), &opts).unwrap();
        assert!(!res.converged);
        assert_eq!(res.stop_reason, StopReason::MaxSweeps);
        assert_eq!(res.sweeps, 1);
    }

    #[test]
    fn off_b_matches_hermitian_part() {
        let a = random_complex(5, 77);
        assert_relative_eq!(off_b(&a), a.hermitian_part().off_norm(), epsilon = 1e-14);
    }
}
