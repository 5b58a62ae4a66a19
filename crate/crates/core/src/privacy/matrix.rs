//! Bit-packed obfuscated lower-triangular adjacency matrix.
//!
//! Row `i` holds the randomized-response output for node `i`'s possible
//! edges to nodes `0..i`, so the full matrix is n(n-1)/2 bits.

use std::io::{Read, Write};

use crate::error::{Error, Result};

const MAGIC: [u8; 4] = *b"FGRM";

#[derive(Clone, Debug, PartialEq)]
pub struct ObfuscatedMatrix {
    node_count: usize,
    seed: u64,
    words: Vec<u64>,
    /// Keep probability used for each row; informational, not serialized.
    row_retention: Vec<f64>,
}

fn word_count(node_count: usize) -> usize {
    let bits = node_count * (node_count - 1) / 2;
    bits.div_ceil(64)
}

impl ObfuscatedMatrix {
    /// All-zero matrix for `node_count` nodes.
    pub fn new(node_count: usize, seed: u64) -> Self {
        ObfuscatedMatrix {
            node_count,
            seed,
            words: vec![0u64; if node_count < 2 { 0 } else { word_count(node_count) }],
            row_retention: vec![0.0; node_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn bit_index(i: u32, j: u32) -> usize {
        debug_assert!(j < i, "matrix holds only pairs with j < i, got ({i}, {j})");
        (i as usize) * (i as usize - 1) / 2 + j as usize
    }

    /// Bit for the pair `(i, j)` with `j < i`.
    pub fn get(&self, i: u32, j: u32) -> bool {
        let idx = Self::bit_index(i, j);
        (self.words[idx / 64] >> (idx % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: u32, j: u32, value: bool) {
        let idx = Self::bit_index(i, j);
        let mask = 1u64 << (idx % 64);
        if value {
            self.words[idx / 64] |= mask;
        } else {
            self.words[idx / 64] &= !mask;
        }
    }

    pub fn row_retention(&self) -> &[f64] {
        &self.row_retention
    }

    pub fn set_row_retention(&mut self, row: u32, keep: f64) {
        self.row_retention[row as usize] = keep;
    }

    /// Stable 64-bit digest of the matrix contents, for reproducibility
    /// checks across runs.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut mix = |x: u64| {
            for b in x.to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        };
        mix(self.node_count as u64);
        mix(self.seed);
        for &w in &self.words {
            mix(w);
        }
        h
    }

    /// Writes the matrix as a 16-byte header (magic, node count, seed)
    /// followed by the packed bits as little-endian words.
    pub fn write<W: Write>(&self, w: &mut W) -> Result<()> {
        w.write_all(&MAGIC)?;
        w.write_all(&(self.node_count as u32).to_le_bytes())?;
        w.write_all(&self.seed.to_le_bytes())?;
        for word in &self.words {
            w.write_all(&word.to_le_bytes())?;
        }
        Ok(())
    }

    /// Parses the [`write`](Self::write) format. Row retention is not
    /// part of the file; the result carries zeros there.
    pub fn read<R: Read>(r: &mut R) -> Result<Self> {
        let mut header = [0u8; 16];
        r.read_exact(&mut header)
            .map_err(|_| Error::MatrixFormat("truncated header".into()))?;
        if header[..4] != MAGIC {
            return Err(Error::MatrixFormat("bad magic".into()));
        }
        let node_count = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
        let seed = u64::from_le_bytes(header[8..16].try_into().unwrap());
        let mut matrix = ObfuscatedMatrix::new(node_count, seed);
        let mut buf = [0u8; 8];
        for word in matrix.words.iter_mut() {
            r.read_exact(&mut buf)
                .map_err(|_| Error::MatrixFormat("truncated bit data".into()))?;
            *word = u64::from_le_bytes(buf);
        }
        if r.read(&mut buf)? != 0 {
            return Err(Error::MatrixFormat("trailing bytes".into()));
        }
        Ok(matrix)
    }
}
