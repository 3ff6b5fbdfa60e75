//! Python bindings for `rmpolar`.
//!
//! Bits are passed as lists of `0`/`1` integers and soft inputs as lists of
//! log-likelihood ratios `ln(Pr{0}/Pr{1})`. Channels use the same syntax as
//! the command line: `bsc:0.1`, `bec:0.3`, `awgn:2dB`.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rmpolar::sim::write_csv;
use rmpolar::{ChannelModel, ChannelParam, Codeword, FrozenMetric, InfoWord, ListConfig, ListDecoder, SoftVector};

fn to_py(err: rmpolar::Error) -> PyErr {
    match err {
        rmpolar::Error::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn or_py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for rmpolar::Result<T> {
    fn or_py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

fn channel(text: &str, rate: f64) -> PyResult<ChannelModel> {
    text.parse::<ChannelParam>().and_then(|c| c.resolve(rate)).or_py()
}

fn frozen_metric(text: &str) -> PyResult<FrozenMetric> {
    text.parse().or_py()
}

/// An information set: which paths carry information, the rest frozen to 0.
#[pyclass(name = "CodeSpec", module = "pyrmpolar", frozen)]
struct PyCodeSpec {
    inner: rmpolar::CodeSpec,
}

#[pymethods]
impl PyCodeSpec {
    /// Code of length `2**m` with the given information path indices.
    #[new]
    fn new(m: u32, info: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: rmpolar::CodeSpec::new(m, info).or_py()? })
    }

    /// Reed-Muller code `RM(r, m)`.
    #[staticmethod]
    fn rm(r: u32, m: u32) -> PyResult<Self> {
        Ok(Self { inner: rmpolar::freeze_rm(r, m).or_py()? })
    }

    /// `k` most reliable paths on an erasure channel with erasure probability `z`.
    #[staticmethod]
    #[pyo3(signature = (m, k, z = 0.5))]
    fn bec(m: u32, k: usize, z: f64) -> PyResult<Self> {
        Ok(Self { inner: rmpolar::freeze_bec(m, k, z).or_py()? })
    }

    /// `k` most reliable paths estimated by genie-aided decoding on `channel`.
    #[staticmethod]
    #[pyo3(signature = (m, k, channel, trials = 10_000, seed = 0))]
    fn montecarlo(py: Python<'_>, m: u32, k: usize, channel: &str, trials: usize, seed: u64) -> PyResult<Self> {
        let model = self::channel(channel, k as f64 / (1u64 << m) as f64)?;
        let inner = py.detach(|| rmpolar::freeze_montecarlo(m, k, &model, trials, seed)).or_py()?;
        Ok(Self { inner })
    }

    /// Every path is an information path.
    #[staticmethod]
    fn full(m: u32) -> PyResult<Self> {
        Ok(Self { inner: rmpolar::CodeSpec::full(m).or_py()? })
    }

    /// Parses the text of a frozen-set file.
    #[staticmethod]
    fn from_frozen_set(text: &str) -> PyResult<Self> {
        Ok(Self { inner: rmpolar::read_frozen_set(text.as_bytes()).or_py()? })
    }

    /// The frozen-set file text for this code.
    fn to_frozen_set(&self) -> PyResult<String> {
        let mut out = Vec::new();
        rmpolar::write_frozen_set(&self.inner, &mut out).or_py()?;
        Ok(String::from_utf8(out).expect("frozen-set files are ASCII"))
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.levels()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.length()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn rate(&self) -> f64 {
        self.inner.rate()
    }

    #[getter]
    fn rm_order(&self) -> Option<u32> {
        self.inner.rm_order()
    }

    /// Information path indices in ascending order.
    #[getter]
    fn info_indices(&self) -> Vec<usize> {
        self.inner.info_indices_ascending()
    }

    /// Information path indices in decoding order.
    #[getter]
    fn processing_order(&self) -> Vec<usize> {
        self.inner.info_paths().iter().map(|p| p.index()).collect()
    }

    fn is_info(&self, index: usize) -> bool {
        self.inner.is_info(index)
    }

    fn __repr__(&self) -> String {
        format!("CodeSpec(m={}, k={})", self.inner.levels(), self.inner.dimension())
    }
}

/// Bits as a list of ints (a `Vec<u8>` would become `bytes`).
fn bit_list(bits: &[u8]) -> Vec<u32> {
    bits.iter().map(|&b| u32::from(b)).collect()
}

fn info_word(bits: Vec<u8>) -> PyResult<InfoWord> {
    InfoWord::new(bits).or_py()
}

fn beliefs(spec: &PyCodeSpec, llr: Vec<f64>) -> PyResult<SoftVector> {
    if llr.len() != spec.inner.length() {
        return Err(PyValueError::new_err(format!(
            "expected {} log-likelihood ratios, got {}",
            spec.inner.length(),
            llr.len()
        )));
    }
    Ok(SoftVector::from_llr(llr))
}

fn ops_dict<'py>(py: Python<'py>, ops: &rmpolar::OpCounts) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kernel", ops.kernel)?;
    d.set_item("leaf", ops.leaf)?;
    d.set_item("select", ops.select)?;
    d.set_item("copied", ops.copied)?;
    Ok(d)
}

/// Encodes an information word (bits in decoding order) into a codeword.
#[pyfunction]
fn encode(spec: &PyCodeSpec, info: Vec<u8>) -> PyResult<Vec<u32>> {
    Ok(bit_list(rmpolar::encode(&spec.inner, &info_word(info)?).or_py()?.bits()))
}

/// Encodes and returns `(codeword, xor_operations)`.
#[pyfunction]
fn encode_counted(spec: &PyCodeSpec, info: Vec<u8>) -> PyResult<(Vec<u32>, u64)> {
    let (c, ops) = rmpolar::encode_counted(&spec.inner, &info_word(info)?).or_py()?;
    Ok((bit_list(c.bits()), ops))
}

/// Successive-cancellation decoding. Returns a dict with `info`,
/// `codeword`, `leaf_posteriors`, `metric`, `metric_info` and `ops`.
#[pyfunction]
fn sc_decode<'py>(py: Python<'py>, spec: &PyCodeSpec, llr: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let out = rmpolar::sc_decode(&spec.inner, &beliefs(spec, llr)?).or_py()?;
    let d = PyDict::new(py);
    d.set_item("info", bit_list(out.info.bits()))?;
    d.set_item("codeword", bit_list(out.codeword.bits()))?;
    d.set_item("leaf_posteriors", out.leaf_posteriors)?;
    d.set_item("metric", out.metric_all_leaves)?;
    d.set_item("metric_info", out.metric_info_leaves)?;
    d.set_item("ops", ops_dict(py, &out.ops)?)?;
    Ok(d)
}

/// Successive-cancellation list decoding. Returns `(candidates, ops)` where
/// candidates are `(info, codeword, metric)` tuples, best first.
#[pyfunction]
#[pyo3(signature = (spec, llr, list_size, frozen_metric = "include"))]
#[allow(clippy::type_complexity)]
fn list_decode<'py>(
    py: Python<'py>,
    spec: &PyCodeSpec,
    llr: Vec<f64>,
    list_size: usize,
    frozen_metric: &str,
) -> PyResult<(Vec<(Vec<u32>, Vec<u32>, f64)>, Bound<'py, PyDict>)> {
    let config = ListConfig { frozen_metric: self::frozen_metric(frozen_metric)?, ..ListConfig::new(list_size) };
    let out = ListDecoder::new(config).or_py()?.decode(&spec.inner, &beliefs(spec, llr)?).or_py()?;
    let candidates =
        out.candidates.into_iter().map(|c| (bit_list(c.info.bits()), bit_list(c.codeword.bits()), c.metric)).collect();
    Ok((candidates, ops_dict(py, &out.ops)?))
}

/// Exhaustive maximum-likelihood decoding: `(info, codeword, loglik)`.
#[pyfunction]
fn ml_decode(py: Python<'_>, spec: &PyCodeSpec, llr: Vec<f64>) -> PyResult<(Vec<u32>, Vec<u32>, f64)> {
    let beliefs = beliefs(spec, llr)?;
    let out = py.detach(|| rmpolar::ml_decode(&spec.inner, &beliefs)).or_py()?;
    Ok((bit_list(out.info.bits()), bit_list(out.codeword.bits()), out.loglik))
}

/// `sum ln Pr{c_j}` of a codeword under the given log-likelihood ratios.
#[pyfunction]
fn codeword_loglik(codeword: Vec<u8>, llr: Vec<f64>) -> PyResult<f64> {
    let c = Codeword::new(codeword).or_py()?;
    rmpolar::codeword_loglik(&c, &SoftVector::from_llr(llr)).or_py()
}

/// Maps bit 0 to +1 and bit 1 to -1.
#[pyfunction]
fn modulate(codeword: Vec<u8>) -> PyResult<Vec<f64>> {
    Ok(rmpolar::modulate(&Codeword::new(codeword).or_py()?))
}

/// Passes symbols through `channel`; `rate` converts Eb/N0 for AWGN.
#[pyfunction]
#[pyo3(signature = (channel, symbols, seed, rate = 1.0))]
fn transmit(channel: &str, symbols: Vec<f64>, seed: u64, rate: f64) -> PyResult<Vec<f64>> {
    let model = self::channel(channel, rate)?;
    Ok(rmpolar::transmit(&model, &symbols, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Log-likelihood ratios of channel observations.
#[pyfunction]
#[pyo3(signature = (channel, observations, rate = 1.0))]
fn posteriors(channel: &str, observations: Vec<f64>, rate: f64) -> PyResult<Vec<f64>> {
    let model = self::channel(channel, rate)?;
    Ok(rmpolar::posteriors(&model, &observations).llr().to_vec())
}

#[pyfunction]
fn rm_dimension(r: u32, m: u32) -> PyResult<usize> {
    rmpolar::rm_dimension(r, m).or_py()
}

/// Number of ones in a path.
#[pyfunction]
fn path_weight(index: usize, m: u32) -> PyResult<u32> {
    Ok(rmpolar::index_path(index, m).or_py()?.weight())
}

/// Bits `(i_1, ..., i_m)` of the path with the given index.
#[pyfunction]
fn index_path(index: usize, m: u32) -> PyResult<Vec<u32>> {
    Ok(bit_list(&rmpolar::index_path(index, m).or_py()?.bits()))
}

/// Index of the path with bits `(i_1, ..., i_m)`.
#[pyfunction]
fn path_index(bits: Vec<u8>) -> PyResult<usize> {
    Ok(rmpolar::Path::from_bits(&bits).or_py()?.index())
}

/// Evaluation of the monomial of a path at every point.
#[pyfunction]
fn monomial_codeword(index: usize, m: u32) -> PyResult<Vec<u32>> {
    let path = rmpolar::index_path(index, m).or_py()?;
    Ok(bit_list(rmpolar::monomial_codeword(&path).bits()))
}

/// Monte-Carlo error rates; returns the CSV text.
#[pyfunction]
#[pyo3(signature = (spec, channels, list_size = 1, trials = 1000, seed = 0, frozen_metric = "include"))]
fn simulate(
    py: Python<'_>,
    spec: &PyCodeSpec,
    channels: Vec<String>,
    list_size: usize,
    trials: u64,
    seed: u64,
    frozen_metric: &str,
) -> PyResult<String> {
    let channels = channels.iter().map(|c| c.parse::<ChannelParam>()).collect::<rmpolar::Result<Vec<_>>>().or_py()?;
    let cfg = rmpolar::TrialConfig {
        list_size,
        trials,
        seed,
        frozen_metric: self::frozen_metric(frozen_metric)?,
        ..rmpolar::TrialConfig::new(spec.inner.clone(), channels)
    };
    let rows = py.detach(|| rmpolar::run_simulation(&cfg)).or_py()?;
    let mut out = Vec::new();
    write_csv(&rows, &mut out).or_py()?;
    Ok(String::from_utf8(out).expect("CSV output is UTF-8"))
}

/// Operation counts and fitted constants. Returns a dict with
/// `decoder_coefficient`, `encoder_coefficient`, and per-point lists.
#[pyfunction]
#[pyo3(signature = (levels, list_sizes, trials = 10, seed = 0, code = "full"))]
fn complexity_probe<'py>(
    py: Python<'py>,
    levels: Vec<u32>,
    list_sizes: Vec<usize>,
    trials: u64,
    seed: u64,
    code: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let code: rmpolar::ProbeCode = code.parse().or_py()?;
    let report = py.detach(|| rmpolar::complexity_probe(code, &levels, &list_sizes, trials, seed)).or_py()?;
    let decoder = report
        .decoder
        .iter()
        .map(|p| {
            let d = PyDict::new(py);
            d.set_item("m", p.m)?;
            d.set_item("n", p.n)?;
            d.set_item("list_size", p.list_size)?;
            d.set_item("mean_kernel_ops", p.mean_kernel_ops)?;
            d.set_item("mean_select_ops", p.mean_select_ops)?;
            d.set_item("mean_copied", p.mean_copied)?;
            d.set_item("relative_residual", p.relative_residual)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let encoder = report
        .encoder
        .iter()
        .map(|p| {
            let d = PyDict::new(py);
            d.set_item("m", p.m)?;
            d.set_item("n", p.n)?;
            d.set_item("ops", p.ops)?;
            d.set_item("relative_residual", p.relative_residual)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    let d = PyDict::new(py);
    d.set_item("decoder_coefficient", report.decoder_coefficient)?;
    d.set_item("max_decoder_residual", report.max_decoder_residual())?;
    d.set_item("decoder", decoder)?;
    d.set_item("encoder_coefficient", report.encoder_coefficient)?;
    d.set_item("max_encoder_residual", report.max_encoder_residual())?;
    d.set_item("encoder", encoder)?;
    Ok(d)
}

#[pymodule]
fn pyrmpolar(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCodeSpec>()?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(encode_counted, m)?)?;
    m.add_function(wrap_pyfunction!(sc_decode, m)?)?;
    m.add_function(wrap_pyfunction!(list_decode, m)?)?;
    m.add_function(wrap_pyfunction!(ml_decode, m)?)?;
    m.add_function(wrap_pyfunction!(codeword_loglik, m)?)?;
    m.add_function(wrap_pyfunction!(modulate, m)?)?;
    m.add_function(wrap_pyfunction!(transmit, m)?)?;
    m.add_function(wrap_pyfunction!(posteriors, m)?)?;
    m.add_function(wrap_pyfunction!(rm_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(path_weight, m)?)?;
    m.add_function(wrap_pyfunction!(index_path, m)?)?;
    m.add_function(wrap_pyfunction!(path_index, m)?)?;
    m.add_function(wrap_pyfunction!(monomial_codeword, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(complexity_probe, m)?)?;
    Ok(())
}
