//! C ABI over the `mqi` library.
//!
//! Parameters and spectra are opaque heap handles created by `*_new`
//! functions and released with the matching `*_free`. Every fallible call
//! returns an [`MqiStatus`] and writes its result through an out-pointer;
//! on failure the message is kept per thread and can be copied out with
//! [`mqi_last_error_message`].

use std::cell::RefCell;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mqi::{
    amplitudes, equal_split_detunings, gate_metrics_with, memory_metrics_with, numeric_amplitudes, simulate_default,
    Detuning, Error, GateKind, GaussianSpectrum, SpectralAverage, SystemParams, WavePacket,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqiStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    NoCrossing = 3,
    IncompleteScattering = 4,
    IntegratorInstability = 5,
    DegenerateScattering = 6,
    DegenerateProtocol = 7,
    Io = 8,
    Panic = 9,
}

impl From<&Error> for MqiStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => MqiStatus::InvalidArgument,
            Error::NoCrossing { .. } => MqiStatus::NoCrossing,
            Error::IncompleteScattering { .. } => MqiStatus::IncompleteScattering,
            Error::IntegratorInstability { .. } => MqiStatus::IntegratorInstability,
            Error::DegenerateScattering { .. } => MqiStatus::DegenerateScattering,
            Error::DegenerateProtocol { .. } => MqiStatus::DegenerateProtocol,
            Error::Io(_) => MqiStatus::Io,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqiGate {
    Swap = 0,
    Entangle = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqiAverage {
    Detuning = 0,
    Pulse = 1,
}

/// Opaque coupling parameters.
pub struct MqiParams(SystemParams);

/// Opaque Gaussian photon spectrum.
pub struct MqiSpectrum(GaussianSpectrum);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MqiAmplitudes {
    pub t_re: f64,
    pub t_im: f64,
    pub r_re: f64,
    pub r_im: f64,
    pub excited_re: f64,
    pub excited_im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MqiMetrics {
    pub f_bar: f64,
    pub eta_bar: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MqiEntanglement {
    pub concurrence: f64,
    pub bell_fidelity: f64,
    pub success_prob: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MqiDynamics {
    pub p_transmit: f64,
    pub p_reflect: f64,
    pub p_loss: f64,
    pub residual_excitation: f64,
    pub abs_t: f64,
    pub abs_r: f64,
    pub narrowband: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (MqiStatus, String)>) -> MqiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            MqiStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MqiStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (MqiStatus, String) {
    (MqiStatus::from(&e), e.to_string())
}

fn null(what: &str) -> (MqiStatus, String) {
    (MqiStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or a live handle from this library.
unsafe fn params_ref<'a>(p: *const MqiParams, what: &str) -> Result<&'a SystemParams, (MqiStatus, String)> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| null(what))
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (MqiStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Boxes `value` only once `out` is known to be writable.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> Result<(), (MqiStatus, String)> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

fn average(a: MqiAverage) -> SpectralAverage {
    match a {
        MqiAverage::Detuning => SpectralAverage::DetuningAverage,
        MqiAverage::Pulse => SpectralAverage::PulseOverlap,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mqi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated and
/// NUL-terminated) and returns the full message length in bytes, excluding
/// the terminator. Pass a null `buf` to query the length.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes of writes.
#[no_mangle]
pub unsafe extern "C" fn mqi_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Creates parameters from explicit rates (units of your choice, all ≥ 0).
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn mqi_params_new(gamma: f64, gamma_f: f64, gamma_b: f64, out: *mut *mut MqiParams) -> MqiStatus {
    guard(|| {
        let p = SystemParams::new(gamma, gamma_f, gamma_b).map_err(lib_err)?;
        write_handle(out, MqiParams(p))
    })
}

/// Creates symmetric parameters with γ = 1 and Γ_f = Γ_b = `beta`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn mqi_params_from_beta(beta: f64, out: *mut *mut MqiParams) -> MqiStatus {
    guard(|| {
        let p = SystemParams::from_beta(beta).map_err(lib_err)?;
        write_handle(out, MqiParams(p))
    })
}

/// # Safety
/// `p` must be null or a handle from `mqi_params_*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mqi_params_free(p: *mut MqiParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Gaussian spectrum; `n_points = 1` gives a monochromatic photon at
/// `center` and ignores `sigma` and `span`.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn mqi_spectrum_new(
    center: f64,
    sigma: f64,
    n_points: usize,
    span: f64,
    out: *mut *mut MqiSpectrum,
) -> MqiStatus {
    guard(|| {
        let s = if n_points == 1 {
            if !center.is_finite() {
                return Err((MqiStatus::InvalidArgument, "center must be finite".into()));
            }
            GaussianSpectrum::monochromatic(center)
        } else {
            GaussianSpectrum::new(center, sigma)
                .and_then(|s| s.with_points(n_points))
                .and_then(|s| s.with_span(span))
                .map_err(lib_err)?
        };
        write_handle(out, MqiSpectrum(s))
    })
}

/// # Safety
/// `s` must be null or a handle from `mqi_spectrum_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mqi_spectrum_free(s: *mut MqiSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Stationary transmission, reflection and excited-state amplitudes.
///
/// # Safety
/// `p` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mqi_amplitudes(p: *const MqiParams, delta: f64, out: *mut MqiAmplitudes) -> MqiStatus {
    guard(|| {
        let p = params_ref(p, "params")?;
        let a = amplitudes(p, Detuning::new(delta).map_err(lib_err)?);
        write_out(
            out,
            MqiAmplitudes {
                t_re: a.t.re,
                t_im: a.t.im,
                r_re: a.r.re,
                r_im: a.r.im,
                excited_re: a.phi_e.re,
                excited_im: a.phi_e.im,
            },
        )
    })
}

/// Detunings of equal reflection and transmission, positive first.
///
/// # Safety
/// `p` must be a live handle; `plus` and `minus` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn mqi_equal_split(p: *const MqiParams, plus: *mut f64, minus: *mut f64) -> MqiStatus {
    guard(|| {
        let p = params_ref(p, "params")?;
        if plus.is_null() || minus.is_null() {
            return Err(null("output pointer"));
        }
        let (a, b) = equal_split_detunings(p).map_err(lib_err)?;
        write_out(plus, a.value())?;
        write_out(minus, b.value())
    })
}

/// Average fidelity and efficiency of the SWAP or √SWAP gate.
///
/// # Safety
/// `p` and `s` must be live handles and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mqi_gate_metrics(
    kind: MqiGate,
    p: *const MqiParams,
    s: *const MqiSpectrum,
    avg: MqiAverage,
    out: *mut MqiMetrics,
) -> MqiStatus {
    guard(|| {
        let p = params_ref(p, "params")?;
        let s = s.as_ref().ok_or_else(|| null("spectrum"))?;
        let kind = match kind {
            MqiGate::Swap => GateKind::Swap,
            MqiGate::Entangle => GateKind::Entangle,
        };
        let r = gate_metrics_with(kind, p, &s.0, average(avg)).map_err(lib_err)?;
        write_out(out, MqiMetrics { f_bar: r.f_bar, eta_bar: r.eta_bar })
    })
}

/// Average fidelity and efficiency of the photon memory.
///
/// # Safety
/// `p` and `s` must be live handles and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mqi_memory_metrics(
    p: *const MqiParams,
    s: *const MqiSpectrum,
    avg: MqiAverage,
    out: *mut MqiMetrics,
) -> MqiStatus {
    guard(|| {
        let p = params_ref(p, "params")?;
        let s = s.as_ref().ok_or_else(|| null("spectrum"))?;
        let r = memory_metrics_with(p, &s.0, average(avg)).map_err(lib_err)?;
        write_out(out, MqiMetrics { f_bar: r.f_bar, eta_bar: r.eta_bar })
    })
}

/// Two-node entanglement distribution; the spectrum must be centered at
/// node A's coupling.
///
/// # Safety
/// `a`, `b` and `s` must be live handles and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mqi_remote_entanglement(
    a: *const MqiParams,
    b: *const MqiParams,
    s: *const MqiSpectrum,
    out: *mut MqiEntanglement,
) -> MqiStatus {
    guard(|| {
        let a = params_ref(a, "node A params")?;
        let b = params_ref(b, "node B params")?;
        let s = s.as_ref().ok_or_else(|| null("spectrum"))?;
        let state = mqi::gates::remote_entanglement(a, b, &s.0).map_err(lib_err)?;
        let bell = mqi::gates::ideal_bell_state();
        write_out(
            out,
            MqiEntanglement {
                concurrence: state.concurrence(),
                bell_fidelity: state.fidelity_with(&bell),
                success_prob: state.success_prob,
            },
        )
    })
}

/// Wave-packet simulation at the default grid, step and duration.
///
/// # Safety
/// `p` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mqi_simulate(
    p: *const MqiParams,
    delta: f64,
    sigma_k: f64,
    out: *mut MqiDynamics,
) -> MqiStatus {
    guard(|| {
        let p = params_ref(p, "params")?;
        let wp = WavePacket::new(delta, sigma_k).map_err(lib_err)?;
        let res = simulate_default(p, &wp).map_err(lib_err)?;
        let num = numeric_amplitudes(&res, &wp, p);
        write_out(
            out,
            MqiDynamics {
                p_transmit: res.p_transmit,
                p_reflect: res.p_reflect,
                p_loss: res.p_loss,
                residual_excitation: res.residual_excitation,
                abs_t: num.abs_t,
                abs_r: num.abs_r,
                narrowband: num.narrowband,
            },
        )
    })
}
