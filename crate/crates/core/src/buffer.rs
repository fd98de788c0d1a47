//! 64-byte aligned single-precision storage.

use std::alloc::{self, Layout};
use std::mem::MaybeUninit;
use std::ops::{Deref, DerefMut};
use std::ptr::NonNull;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{FftError, Result};

/// Alignment of every buffer start address, in bytes.
pub const ALIGNMENT: usize = 64;

static LIVE_BYTES: AtomicUsize = AtomicUsize::new(0);
static PEAK_BYTES: AtomicUsize = AtomicUsize::new(0);

/// Bytes currently held by live [`SignalBuffer`]s.
pub fn live_bytes() -> usize {
    LIVE_BYTES.load(Ordering::Relaxed)
}

/// High-water mark of [`live_bytes`] over the life of the process.
pub fn peak_bytes() -> usize {
    PEAK_BYTES.load(Ordering::Relaxed)
}

fn record_alloc(bytes: usize) {
    let live = LIVE_BYTES.fetch_add(bytes, Ordering::Relaxed) + bytes;
    PEAK_BYTES.fetch_max(live, Ordering::Relaxed);
}

fn record_free(bytes: usize) {
    LIVE_BYTES.fetch_sub(bytes, Ordering::Relaxed);
}

/// Contiguous array of `f32` whose start address is 64-byte aligned.
pub struct SignalBuffer {
    ptr: NonNull<f32>,
    len: usize,
}

// The buffer uniquely owns its allocation.
unsafe impl Send for SignalBuffer {}
unsafe impl Sync for SignalBuffer {}

impl SignalBuffer {
    fn layout(len: usize) -> Result<Layout> {
        let bytes = len
            .checked_mul(std::mem::size_of::<f32>())
            .ok_or(FftError::AllocationFailure { bytes: usize::MAX })?;
        Layout::from_size_align(bytes.max(ALIGNMENT), ALIGNMENT)
            .map_err(|_| FftError::AllocationFailure { bytes })
    }

    /// Allocates without touching the memory.
    fn allocate(len: usize) -> Result<(NonNull<f32>, Layout)> {
        let layout = Self::layout(len)?;
        // SAFETY: layout has non-zero size.
        let raw = unsafe { alloc::alloc(layout) };
        let ptr = NonNull::new(raw as *mut f32).ok_or(FftError::AllocationFailure {
            bytes: layout.size(),
        })?;
        record_alloc(layout.size());
        Ok((ptr, layout))
    }

    fn uninit_slice(&mut self) -> &mut [MaybeUninit<f32>] {
        // SAFETY: the allocation holds `len` f32 slots; MaybeUninit permits
        // writing to them before they are initialised.
        unsafe { std::slice::from_raw_parts_mut(self.ptr.as_ptr().cast(), self.len) }
    }

    /// Zero-filled buffer, written serially by the calling thread.
    pub fn zeroed(len: usize) -> Result<Self> {
        let (ptr, _) = Self::allocate(len)?;
        let mut buf = Self { ptr, len };
        for slot in buf.uninit_slice() {
            slot.write(0.0);
        }
        Ok(buf)
    }

    /// Zero-filled buffer whose first write happens in parallel, one chunk of
    /// `chunk` elements per task, on the current rayon pool.
    ///
    /// Run it inside the pool that will later process the data so that pages
    /// are first touched by the workers that use them.
    pub fn zeroed_first_touch(len: usize, chunk: usize) -> Result<Self> {
        let (ptr, _) = Self::allocate(len)?;
        let mut buf = Self { ptr, len };
        buf.uninit_slice()
            .par_chunks_mut(chunk.max(1))
            .for_each(|part| {
                for slot in part {
                    slot.write(0.0);
                }
            });
        Ok(buf)
    }

    /// Buffer holding a copy of `values`.
    pub fn from_slice(values: &[f32]) -> Result<Self> {
        let mut buf = Self::zeroed(values.len())?;
        buf.copy_from_slice(values);
        Ok(buf)
    }

    pub fn as_ptr(&self) -> *const f32 {
        self.ptr.as_ptr()
    }
}

impl Deref for SignalBuffer {
    type Target = [f32];

    fn deref(&self) -> &[f32] {
        // SAFETY: every constructor initialises all `len` elements.
        unsafe { std::slice::from_raw_parts(self.ptr.as_ptr(), self.len) }
    }
}

impl DerefMut for SignalBuffer {
    fn deref_mut(&mut self) -> &mut [f32] {
        // SAFETY: as in `deref`, and `&mut self` guarantees uniqueness.
        unsafe { std::slice::from_raw_parts_mut(self.ptr.as_ptr(), self.len) }
    }
}

impl Drop for SignalBuffer {
    fn drop(&mut self) {
        let layout = Self::layout(self.len).expect("layout was valid at allocation");
        // SAFETY: allocated in `allocate` with this exact layout.
        unsafe { alloc::dealloc(self.ptr.as_ptr().cast(), layout) };
        record_free(layout.size());
    }
}

impl std::fmt::Debug for SignalBuffer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SignalBuffer")
            .field("len", &self.len)
            .field("ptr", &self.ptr)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buffers_are_aligned_and_zeroed() {
        for len in [1, 3, 16, 1000, 4096] {
            let buf = SignalBuffer::zeroed(len).unwrap();
            assert_eq!(buf.as_ptr() as usize % ALIGNMENT, 0);
            assert_eq!(buf.len(), len);
            assert!(buf.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn first_touch_fills_every_chunk() {
        let buf = SignalBuffer::zeroed_first_touch(1037, 64).unwrap();
        assert_eq!(buf.as_ptr() as usize % ALIGNMENT, 0);
        assert_eq!(buf.len(), 1037);
        assert!(buf.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn empty_buffer_is_valid() {
        let buf = SignalBuffer::zeroed(0).unwrap();
        assert!(buf.is_empty());
    }

    #[test]
    fn peak_covers_live_allocation() {
        let buf = SignalBuffer::zeroed(1 << 16).unwrap();
        assert!(peak_bytes() >= buf.len() * 4);
        let before = peak_bytes();
        assert!(peak_bytes() >= before);
    }

    #[test]
    fn oversize_request_fails_cleanly() {
        assert!(matches!(
            SignalBuffer::zeroed(usize::MAX / 2),
            Err(FftError::AllocationFailure { .. })
        ));
    }
}
