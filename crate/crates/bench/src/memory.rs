//! Peak memory of the current process.

use bigfft::buffer;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemSource {
    /// `VmPeak` from `/proc/self/status`: peak virtual memory of the process.
    VmPeak,
    /// High-water mark of the library's own signal buffers.
    Internal,
}

impl MemSource {
    pub fn label(self) -> &'static str {
        match self {
            MemSource::VmPeak => "VmPeak",
            MemSource::Internal => "internal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryReading {
    pub bytes: u64,
    pub source: MemSource,
}

/// Extracts `VmPeak` in bytes from the text of a `/proc/<pid>/status` file.
pub fn parse_vm_peak(status: &str) -> Option<u64> {
    let line = status.lines().find(|l| l.starts_with("VmPeak:"))?;
    let mut fields = line["VmPeak:".len()..].split_whitespace();
    let value: u64 = fields.next()?.parse().ok()?;
    let scale = match fields.next() {
        Some("kB") | None => 1024,
        Some("B") => 1,
        Some(_) => return None,
    };
    value.checked_mul(scale)
}

/// Peak memory from the OS when available, else the internal high-water
/// mark, labelled with its source.
pub fn peak_memory_probe() -> MemoryReading {
    std::fs::read_to_string("/proc/self/status")
        .ok()
        .and_then(|text| parse_vm_peak(&text))
        .map(|bytes| MemoryReading {
            bytes,
            source: MemSource::VmPeak,
        })
        .unwrap_or_else(internal_peak)
}

pub fn internal_peak() -> MemoryReading {
    MemoryReading {
        bytes: buffer::peak_bytes() as u64,
        source: MemSource::Internal,
    }
}
