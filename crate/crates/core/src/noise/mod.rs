//! Synaptic and interference noise, and its reduction to an
//! insertion/erasure channel.
//!
//! A connection between two neurons is made of `n_syn` synapses, each of which
//! releases with probability `p_rel`, so one active input delivers
//! `B(n_syn, p_rel)` stimulation quanta. Interfering neurons outside the
//! network fire independently; the number of excitatory (inhibitory) ones that
//! hit the integration window is Poisson with rate `n_ex * f_ext * t_int`
//! (`n_in * f_ext * t_int`). The total stimulation is
//!
//! ```text
//! S = sum_{signal} B(n_syn, p) + sum_{X_ex} B(n_syn, p) - sum_{X_in} B(n_syn, p)
//! ```
//!
//! and a unit fires when `S >= sigma`. Comparing the "signal present" and
//! "signal absent" distributions of `S` against the threshold yields the
//! erasure and insertion probabilities.

pub mod oracle;

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, Discrete};
use statrs::function::factorial::ln_factorial;

use crate::activity::ActivityVector;
use crate::error::{Error, ParamError, Result};

/// Omitted Poisson tail mass allowed when truncating a compound sum.
pub const POISSON_TAIL_MASS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSynapticModel")]
pub struct SynapticModel {
    n_syn: u32,
    p_rel: f64,
}

#[derive(Deserialize)]
struct RawSynapticModel {
    n_syn: u32,
    p_rel: f64,
}

impl TryFrom<RawSynapticModel> for SynapticModel {
    type Error = ParamError;
    fn try_from(raw: RawSynapticModel) -> Result<Self, ParamError> {
        Self::new(raw.n_syn, raw.p_rel)
    }
}

impl SynapticModel {
    pub fn new(n_syn: u32, p_rel: f64) -> Result<Self, ParamError> {
        if n_syn < 1 {
            return Err(ParamError::OutOfRange {
                name: "n_syn",
                value: f64::from(n_syn),
                range: "[1, inf)",
            });
        }
        check_probability("p_rel", p_rel)?;
        Ok(Self { n_syn, p_rel })
    }

    pub fn n_syn(&self) -> u32 {
        self.n_syn
    }

    pub fn p_rel(&self) -> f64 {
        self.p_rel
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInterferenceModel")]
pub struct InterferenceModel {
    n_ex: u32,
    n_in: u32,
    f_ext: f64,
    t_int: f64,
}

#[derive(Deserialize)]
struct RawInterferenceModel {
    n_ex: u32,
    n_in: u32,
    f_ext: f64,
    t_int: f64,
}

impl TryFrom<RawInterferenceModel> for InterferenceModel {
    type Error = ParamError;
    fn try_from(raw: RawInterferenceModel) -> Result<Self, ParamError> {
        Self::new(raw.n_ex, raw.n_in, raw.f_ext, raw.t_int)
    }
}

impl InterferenceModel {
    pub fn new(n_ex: u32, n_in: u32, f_ext: f64, t_int: f64) -> Result<Self, ParamError> {
        if !(f_ext >= 0.0 && f_ext.is_finite()) {
            return Err(ParamError::OutOfRange {
                name: "f_ext",
                value: f_ext,
                range: "[0, inf)",
            });
        }
        if !(t_int > 0.0 && t_int.is_finite()) {
            return Err(ParamError::OutOfRange {
                name: "t_int",
                value: t_int,
                range: "(0, inf)",
            });
        }
        Ok(Self {
            n_ex,
            n_in,
            f_ext,
            t_int,
        })
    }

    /// No interfering neurons at all.
    pub fn silent() -> Self {
        Self {
            n_ex: 0,
            n_in: 0,
            f_ext: 0.0,
            t_int: 0.01,
        }
    }

    pub fn n_ex(&self) -> u32 {
        self.n_ex
    }

    pub fn n_in(&self) -> u32 {
        self.n_in
    }

    pub fn n_ext(&self) -> u32 {
        self.n_ex + self.n_in
    }

    pub fn f_ext(&self) -> f64 {
        self.f_ext
    }

    pub fn t_int(&self) -> f64 {
        self.t_int
    }

    /// Mean excitatory and inhibitory interferer counts per window.
    pub fn rates(&self) -> (f64, f64) {
        interference_rates(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFiringContext")]
pub struct FiringContext {
    sigma: f64,
    n_inputs: u32,
}

#[derive(Deserialize)]
struct RawFiringContext {
    sigma: f64,
    n_inputs: u32,
}

impl TryFrom<RawFiringContext> for FiringContext {
    type Error = ParamError;
    fn try_from(raw: RawFiringContext) -> Result<Self, ParamError> {
        Self::new(raw.sigma, raw.n_inputs)
    }
}

impl FiringContext {
    pub fn new(sigma: f64, n_inputs: u32) -> Result<Self, ParamError> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(ParamError::OutOfRange {
                name: "sigma",
                value: sigma,
                range: "(0, inf)",
            });
        }
        Ok(Self { sigma, n_inputs })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n_inputs(&self) -> u32 {
        self.n_inputs
    }
}

/// Per-unit insertion and erasure probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNoiseChannel")]
pub struct NoiseChannel {
    p_ins: f64,
    p_del: f64,
}

#[derive(Deserialize)]
struct RawNoiseChannel {
    p_ins: f64,
    p_del: f64,
}

impl TryFrom<RawNoiseChannel> for NoiseChannel {
    type Error = ParamError;
    fn try_from(raw: RawNoiseChannel) -> Result<Self, ParamError> {
        Self::new(raw.p_ins, raw.p_del)
    }
}

impl NoiseChannel {
    pub fn new(p_ins: f64, p_del: f64) -> Result<Self, ParamError> {
        check_probability("p_ins", p_ins)?;
        check_probability("p_del", p_del)?;
        Ok(Self { p_ins, p_del })
    }

    pub fn noiseless() -> Self {
        Self {
            p_ins: 0.0,
            p_del: 0.0,
        }
    }

    pub fn p_ins(&self) -> f64 {
        self.p_ins
    }

    pub fn p_del(&self) -> f64 {
        self.p_del
    }
}

fn check_probability(name: &'static str, value: f64) -> Result<(), ParamError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(ParamError::OutOfRange {
            name,
            value,
            range: "[0, 1]",
        })
    }
}

/// Probability mass function over a contiguous, possibly negative, integer
/// support starting at `support_offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pmf {
    support_offset: i64,
    probabilities: Vec<f64>,
}

impl Pmf {
    /// Validates and wraps a probability table.
    pub fn new(support_offset: i64, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.is_empty() {
            return Err(Error::Format("pmf must have at least one entry".into()));
        }
        if probabilities.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Format(
                "pmf entries must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Format(format!("pmf sums to {total}, expected 1")));
        }
        Ok(Self {
            support_offset,
            probabilities,
        })
    }

    pub fn point_mass(value: i64) -> Self {
        Self {
            support_offset: value,
            probabilities: vec![1.0],
        }
    }

    pub fn support_offset(&self) -> i64 {
        self.support_offset
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Largest value in the support.
    pub fn support_end(&self) -> i64 {
        self.support_offset + self.probabilities.len() as i64 - 1
    }

    /// `(value, probability)` pairs in increasing value order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.support_offset + i as i64, p))
    }

    pub fn prob(&self, value: i64) -> f64 {
        let idx = value - self.support_offset;
        if idx < 0 {
            return 0.0;
        }
        self.probabilities.get(idx as usize).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(v, p)| v as f64 * p).sum()
    }

    /// `P(S < threshold)`.
    pub fn mass_below(&self, threshold: f64) -> f64 {
        self.iter()
            .filter(|&(v, _)| (v as f64) < threshold)
            .map(|(_, p)| p)
            .sum()
    }

    /// `P(S >= threshold)`.
    pub fn mass_at_or_above(&self, threshold: f64) -> f64 {
        self.iter()
            .filter(|&(v, _)| (v as f64) >= threshold)
            .map(|(_, p)| p)
            .sum()
    }

    /// Distribution of the sum of two independent variables.
    pub fn convolve(&self, other: &Pmf) -> Pmf {
        Pmf {
            support_offset: self.support_offset + other.support_offset,
            probabilities: convolve(&self.probabilities, &other.probabilities),
        }
    }

    /// Drops exact-zero entries at both ends of the support.
    pub fn trimmed(mut self) -> Pmf {
        let first = self
            .probabilities
            .iter()
            .position(|&p| p != 0.0)
            .unwrap_or(0);
        let last = self
            .probabilities
            .iter()
            .rposition(|&p| p != 0.0)
            .unwrap_or(first);
        self.probabilities.truncate(last + 1);
        self.probabilities.drain(..first);
        self.support_offset += first as i64;
        self
    }

    /// Distribution of `-S`.
    pub fn negate(&self) -> Pmf {
        let mut probabilities = self.probabilities.clone();
        probabilities.reverse();
        Pmf {
            support_offset: -self.support_end(),
            probabilities,
        }
    }
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Stimulation delivered by one active connection: `B(n_syn, p_rel)`.
pub fn stimulation_pmf(syn: &SynapticModel) -> Pmf {
    let n = syn.n_syn();
    let dist = Binomial::new(syn.p_rel(), u64::from(n)).expect("validated parameters");
    Pmf {
        support_offset: 0,
        probabilities: (0..=u64::from(n)).map(|k| dist.pmf(k)).collect(),
    }
}

/// Mean excitatory and inhibitory interferer counts in one integration window.
pub fn interference_rates(m: &InterferenceModel) -> (f64, f64) {
    let window = m.f_ext() * m.t_int();
    (f64::from(m.n_ex()) * window, f64::from(m.n_in()) * window)
}

/// `e^-lambda * lambda^x / x!`.
pub fn poisson_pmf(lambda: f64, x: u64) -> f64 {
    if lambda == 0.0 {
        return if x == 0 { 1.0 } else { 0.0 };
    }
    (-lambda + x as f64 * lambda.ln() - ln_factorial(x)).exp()
}

/// Default cap on the number of Poisson terms for rate `lambda`.
pub fn default_truncation_cap(lambda: f64) -> usize {
    (10.0 * (lambda + 20.0)).ceil() as usize
}

/// Smallest `x_max` such that `P(X > x_max) < POISSON_TAIL_MASS`.
///
/// Once `x_max + 2 > lambda` the terms beyond `x_max` are dominated by a
/// geometric series of ratio `lambda / (x_max + 2)`, which bounds the tail.
pub fn poisson_truncation(lambda: f64, cap: usize) -> Result<usize> {
    if lambda == 0.0 {
        return Ok(0);
    }
    let mut x_max = 0usize;
    loop {
        let next = (x_max + 2) as f64;
        if next > lambda {
            let bound = poisson_pmf(lambda, x_max as u64 + 1) / (1.0 - lambda / next);
            if bound < POISSON_TAIL_MASS {
                return Ok(x_max);
            }
        }
        x_max += 1;
        if x_max > cap {
            return Err(Error::TruncationCap {
                lambda,
                needed: x_max,
                cap,
            });
        }
    }
}

/// Compound distribution of `sum_{j=1..X} B_j(n_syn, p_rel)` with
/// `X ~ Poisson(lambda)`, built by iterated convolution.
fn compound_pmf(syn: &SynapticModel, lambda: f64) -> Result<Pmf> {
    let x_max = poisson_truncation(lambda, default_truncation_cap(lambda))?;
    let kernel = stimulation_pmf(syn).probabilities;
    let mut acc = vec![0.0; x_max * syn.n_syn() as usize + 1];
    let mut power = vec![1.0];
    for x in 0..=x_max {
        let weight = poisson_pmf(lambda, x as u64);
        for (slot, p) in acc.iter_mut().zip(&power) {
            *slot += weight * p;
        }
        if x < x_max {
            power = convolve(&power, &kernel);
        }
    }
    Ok(Pmf {
        support_offset: 0,
        probabilities: acc,
    })
}

/// Exact distribution of the total stimulation `S` a unit receives.
///
/// With `signal_present` the unit also receives `n_inputs` in-network
/// connections; otherwise it sees interference only.
pub fn total_stimulation_pmf(
    syn: &SynapticModel,
    m: &InterferenceModel,
    ctx: &FiringContext,
    signal_present: bool,
) -> Result<Pmf> {
    let (lambda_ex, lambda_in) = interference_rates(m);
    let excitatory = compound_pmf(syn, lambda_ex)?;
    let inhibitory = compound_pmf(syn, lambda_in)?.negate();
    let mut total = excitatory.convolve(&inhibitory);
    let k_signal = if signal_present { ctx.n_inputs() } else { 0 };
    if k_signal > 0 {
        let single = stimulation_pmf(syn);
        let mut signal = single.clone();
        for _ in 1..k_signal {
            signal = signal.convolve(&single);
        }
        total = signal.convolve(&total);
    }
    Ok(total.trimmed())
}

/// Reduces synaptic and interference noise to `(p_ins, p_del)`.
///
/// A unit fires iff `S >= sigma`.
pub fn reduce_to_channel(
    syn: &SynapticModel,
    m: &InterferenceModel,
    ctx: &FiringContext,
) -> Result<NoiseChannel> {
    let present = total_stimulation_pmf(syn, m, ctx, true)?;
    let absent = total_stimulation_pmf(syn, m, ctx, false)?;
    let p_del = present.mass_below(ctx.sigma()).clamp(0.0, 1.0);
    let p_ins = absent.mass_at_or_above(ctx.sigma()).clamp(0.0, 1.0);
    Ok(NoiseChannel::new(p_ins, p_del)?)
}

/// Passes an intended activity pattern through the channel.
///
/// Intended-active units survive with probability `1 - p_del`; every other
/// unit switches on with probability `p_ins`. Units are visited in index
/// order, one draw each.
pub fn sample_noisy_activity<R: Rng + ?Sized>(
    channel: &NoiseChannel,
    intended: &ActivityVector,
    rng: &mut R,
) -> ActivityVector {
    let keep = 1.0 - channel.p_del();
    let bits = intended
        .as_slice()
        .iter()
        .map(|&on| {
            if on {
                rng.random_bool(keep)
            } else {
                rng.random_bool(channel.p_ins())
            }
        })
        .collect();
    ActivityVector::from_bools(bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;

    fn syn(n: u32, p: f64) -> SynapticModel {
        SynapticModel::new(n, p).unwrap()
    }

    fn interference_with_rates(lambda_ex: f64, lambda_in: f64) -> InterferenceModel {
        // f_ext * t_int = 1/100, so lambda = count / 100
        let scale = 100.0;
        InterferenceModel::new(
            (lambda_ex * scale).round() as u32,
            (lambda_in * scale).round() as u32,
            1.0,
            1.0 / scale,
        )
        .unwrap()
    }

    #[test]
    fn binomial_point_values() {
        let p = stimulation_pmf(&syn(20, 1.0));
        assert_eq!(p.prob(20), 1.0);
        assert_eq!(p.total_mass(), 1.0);

        let half = stimulation_pmf(&syn(20, 0.5));
        assert!((half.prob(10) - 184_756.0 / 1_048_576.0).abs() < 1e-12);

        let fifth = stimulation_pmf(&syn(20, 0.2));
        let mode = fifth
            .iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        assert_eq!(mode.0, 4);
        assert!((mode.1 - 0.218_199_401_946_100_77).abs() < 1e-12);
    }

    #[test]
    fn binomial_mean_identity() {
        for n in [1, 5, 13, 25] {
            for p in [0.0, 0.2, 0.37, 0.8, 1.0] {
                let pmf = stimulation_pmf(&syn(n, p));
                assert!((pmf.total_mass() - 1.0).abs() < 1e-9);
                assert!((pmf.mean() - f64::from(n) * p).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn rates_are_direct_products() {
        let m = InterferenceModel::new(0, 0, 37.0, 0.2).unwrap();
        assert_eq!(interference_rates(&m), (0.0, 0.0));
        let m = InterferenceModel::new(20, 0, 20.0, 0.01).unwrap();
        let (ex, inh) = interference_rates(&m);
        assert!((ex - 4.0).abs() < 1e-12 && inh == 0.0);
        let m = InterferenceModel::new(35, 35, 20.0, 0.01).unwrap();
        let (ex, inh) = interference_rates(&m);
        assert!((ex - 7.0).abs() < 1e-12 && (inh - 7.0).abs() < 1e-12);
        assert_eq!(m.n_ext(), 70);
    }

    #[test]
    fn poisson_point_values() {
        assert_eq!(poisson_pmf(0.0, 0), 1.0);
        assert_eq!(poisson_pmf(0.0, 3), 0.0);
        assert!((poisson_pmf(1.0, 0) - 0.367_879_441_171_442_33).abs() < 1e-12);
        assert!((poisson_pmf(4.0, 4) - 0.195_366_814_813_165_16).abs() < 1e-12);
    }

    #[test]
    fn truncation_leaves_tiny_tail() {
        for lambda in [0.3, 1.0, 4.0, 7.0, 30.0] {
            let x_max = poisson_truncation(lambda, default_truncation_cap(lambda)).unwrap();
            let kept: f64 = (0..=x_max as u64).map(|x| poisson_pmf(lambda, x)).sum();
            assert!(1.0 - kept < 1e-11, "lambda {lambda}: kept {kept}");
        }
    }

    #[test]
    fn truncation_cap_is_enforced() {
        let err = poisson_truncation(50.0, 20).unwrap_err();
        assert!(matches!(err, Error::TruncationCap { cap: 20, .. }));
    }

    #[test]
    fn silent_unit_receives_nothing() {
        let ctx = FiringContext::new(1.0, 3).unwrap();
        let pmf =
            total_stimulation_pmf(&syn(5, 0.5), &InterferenceModel::silent(), &ctx, false).unwrap();
        assert_eq!(pmf, Pmf::point_mass(0));
    }

    #[test]
    fn deterministic_synapses_give_point_mass() {
        let ctx = FiringContext::new(1.0, 3).unwrap();
        let pmf =
            total_stimulation_pmf(&syn(5, 1.0), &InterferenceModel::silent(), &ctx, true).unwrap();
        assert_eq!(pmf.support_offset(), 15);
        assert_eq!(pmf.probabilities(), &[1.0]);
    }

    #[test]
    fn no_inputs_collapses_to_absent_case() {
        let m = interference_with_rates(2.0, 1.0);
        let ctx = FiringContext::new(4.0, 0).unwrap();
        let s = syn(5, 0.5);
        let present = total_stimulation_pmf(&s, &m, &ctx, true).unwrap();
        let absent = total_stimulation_pmf(&s, &m, &ctx, false).unwrap();
        assert_eq!(present.support_offset(), absent.support_offset());
        let bits = |p: &Pmf| {
            p.probabilities()
                .iter()
                .map(|x| x.to_bits())
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&present), bits(&absent));
    }

    #[test]
    fn compound_pmf_is_normalized_with_negative_support() {
        let m = interference_with_rates(7.0, 7.0);
        let ctx = FiringContext::new(10.0, 2).unwrap();
        let pmf = total_stimulation_pmf(&syn(25, 0.8), &m, &ctx, true).unwrap();
        assert!(pmf.support_offset() < 0);
        assert!((pmf.total_mass() - 1.0).abs() < 1e-9);
        assert!(pmf.probabilities().iter().all(|&p| p >= 0.0));
        // E[S] = (n_inputs + lambda_ex - lambda_in) * n_syn * p_rel
        assert!((pmf.mean() - 2.0 * 25.0 * 0.8).abs() < 1e-6);
    }

    #[test]
    fn noiseless_channel_edge_cases() {
        let s = syn(5, 1.0);
        let quiet = InterferenceModel::silent();
        let reach = reduce_to_channel(&s, &quiet, &FiringContext::new(15.0, 3).unwrap()).unwrap();
        assert_eq!((reach.p_ins(), reach.p_del()), (0.0, 0.0));
        let short = reduce_to_channel(&s, &quiet, &FiringContext::new(16.0, 3).unwrap()).unwrap();
        assert_eq!((short.p_ins(), short.p_del()), (0.0, 1.0));
    }

    #[test]
    fn channel_is_monotone_in_threshold() {
        let s = syn(10, 0.5);
        for (ex, inh) in [(0.5, 0.5), (3.0, 1.0), (1.0, 4.0)] {
            let m = interference_with_rates(ex, inh);
            let mut prev: Option<NoiseChannel> = None;
            for sigma in 1..40 {
                let ctx = FiringContext::new(f64::from(sigma), 4).unwrap();
                let ch = reduce_to_channel(&s, &m, &ctx).unwrap();
                if let Some(p) = prev {
                    assert!(ch.p_del() >= p.p_del());
                    assert!(ch.p_ins() <= p.p_ins());
                }
                prev = Some(ch);
            }
        }
    }

    #[test]
    fn identity_and_total_erasure_channels() {
        let intended = ActivityVector::from_units(64, [1, 9, 33, 60]);
        let mut rng = seed::stream(1, "test", &[]);
        let same = sample_noisy_activity(&NoiseChannel::noiseless(), &intended, &mut rng);
        assert_eq!(same, intended);
        let erased =
            sample_noisy_activity(&NoiseChannel::new(0.0, 1.0).unwrap(), &intended, &mut rng);
        assert_eq!(erased.count_active(), 0);
    }

    #[test]
    fn noisy_activity_is_reproducible() {
        let intended = ActivityVector::from_units(2048, (0..8).map(|i| i * 256 + 17));
        let ch = NoiseChannel::new(0.05, 0.2).unwrap();
        let a = sample_noisy_activity(&ch, &intended, &mut seed::stream(9, "x", &[3]));
        let b = sample_noisy_activity(&ch, &intended, &mut seed::stream(9, "x", &[3]));
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(SynapticModel::new(0, 0.5).is_err());
        assert!(SynapticModel::new(5, 1.5).is_err());
        assert!(InterferenceModel::new(1, 1, -1.0, 0.01).is_err());
        assert!(InterferenceModel::new(1, 1, 5.0, 0.0).is_err());
        assert!(FiringContext::new(0.0, 2).is_err());
        assert!(NoiseChannel::new(-0.1, 0.0).is_err());
        assert!(serde_json::from_str::<NoiseChannel>(r#"{"p_ins":0.1,"p_del":2}"#).is_err());
    }
}
