//! Reusable transform state: buffers, worker pool and leaf kernels.

use std::sync::Mutex;

use crate::buffer::SignalBuffer;
use crate::error::{FftError, Result};
use crate::leaf::{LeafDft, RealLeafKernel};
use crate::plan::TransformPlan;
use crate::recombine::Recombiner;
use crate::scatter::scatter;

/// Owns everything one transform configuration needs.
///
/// Fill [`data_mut`](Self::data_mut), call
/// [`run_transform`](Self::run_transform), read [`result`](Self::result).
/// The input is left untouched, so repeated runs on the same data give the
/// same spectrum. Buffers, the worker pool and one leaf kernel per worker are
/// created once here and reused by every run.
pub struct TransformHandle {
    plan: TransformPlan,
    input: SignalBuffer,
    scratch: SignalBuffer,
    kernels: Vec<Mutex<Box<dyn LeafDft>>>,
    pool: rayon::ThreadPool,
}

impl TransformHandle {
    /// Handle using the built-in radix-2 leaf kernel.
    pub fn new(plan: TransformPlan) -> Result<Self> {
        Self::with_leaf(plan, |m| Ok(Box::new(RealLeafKernel::new(m)?)))
    }

    /// Handle whose leaves come from `make_leaf(binsize)`, called once per
    /// worker.
    pub fn with_leaf<F>(plan: TransformPlan, make_leaf: F) -> Result<Self>
    where
        F: Fn(usize) -> Result<Box<dyn LeafDft>>,
    {
        let workers = plan.workers();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("bigfft-worker-{i}"))
            .build()
            .map_err(|e| FftError::ThreadPool(e.to_string()))?;

        let n = plan.n();
        // First touch inside the pool, chunked by bin so each region is
        // written by a worker of the pool that later processes it.
        let chunk = plan.binsize().max(n.div_ceil(8 * workers));
        let (input, scratch) = pool.install(|| -> Result<_> {
            Ok((
                SignalBuffer::zeroed_first_touch(n, chunk)?,
                SignalBuffer::zeroed_first_touch(n, chunk)?,
            ))
        })?;

        let kernels = (0..workers)
            .map(|_| {
                let leaf = make_leaf(plan.binsize())?;
                if leaf.size() != plan.binsize() {
                    return Err(FftError::SizeMismatch {
                        expected: plan.binsize(),
                        actual: leaf.size(),
                    });
                }
                Ok(Mutex::new(leaf))
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Self {
            plan,
            input,
            scratch,
            kernels,
            pool,
        })
    }

    pub fn plan(&self) -> &TransformPlan {
        &self.plan
    }

    /// Input samples, read-only.
    pub fn data(&self) -> &[f32] {
        &self.input
    }

    /// Input samples, writable. Distinct storage from [`result`](Self::result).
    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.input
    }

    /// Packed spectrum of the last run. Before the first run the contents
    /// are unspecified (currently zeros).
    pub fn result(&self) -> &[f32] {
        &self.scratch
    }

    /// Mutable access to the output buffer, e.g. for corrupting it in tests.
    pub fn result_mut(&mut self) -> &mut [f32] {
        &mut self.scratch
    }

    /// Scatter, leaf transforms and reassembly on the worker pool.
    pub fn run_transform(&mut self) -> Result<()> {
        let Self {
            plan,
            input,
            scratch,
            kernels,
            pool,
        } = self;
        pool.install(|| {
            scatter(input, scratch, plan)?;
            Recombiner::new(plan.binsize(), plan.k_tile(), plan.workers(), kernels)
                .process_and_reassemble(scratch)
        })
    }
}

impl std::fmt::Debug for TransformHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransformHandle")
            .field("plan", &self.plan)
            .field("kernels", &self.kernels.len())
            .finish()
    }
}
