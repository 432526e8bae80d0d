//! Overflow removal that leaves block edges alone where it can.
//!
//! Each 8x8 spatial block is split into a 6x6 interior `I` (36 pixels) and
//! the 28-pixel ring `B` along its edges, which includes the four corners
//! `C`. Preprocessing only touches `B` when `I` itself needed clamping and
//! `B` is not too badly overflowed; the full-clamp baseline clamps every
//! overflowing pixel of every overflowing block.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::jpeg::{
    block_from_spatial, block_to_spatial, overflows, to_spatial, Block, CoeffBlock, CoeffImage,
    SpatialImage, PIXEL_MAX, PIXEL_MIN,
};
use crate::BLOCK_LEN;

/// Region a pixel of an 8x8 block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
}

#[inline]
pub fn region_of(index: usize) -> Region {
    let (r, c) = (index / 8, index % 8);
    if (1..7).contains(&r) && (1..7).contains(&c) {
        Region::Interior
    } else {
        Region::Boundary
    }
}

#[inline]
pub fn is_corner(index: usize) -> bool {
    matches!(index, 0 | 7 | 56 | 63)
}

/// Index sets of the interior, boundary and corner pixels of a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
    pub corners: Vec<usize>,
}

pub fn partition_block() -> BlockPartition {
    let (interior, boundary): (Vec<usize>, Vec<usize>) =
        (0..BLOCK_LEN).partition(|&i| region_of(i) == Region::Interior);
    let corners = (0..BLOCK_LEN).filter(|&i| is_corner(i)).collect();
    BlockPartition { interior, boundary, corners }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BlockOverflow {
    pub interior: usize,
    pub boundary: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct OverflowTotals {
    pub interior: u64,
    pub boundary: u64,
    pub corner: u64,
}

/// Where overflow happens: per block and per in-block position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverflowCensus {
    pub per_block: Vec<BlockOverflow>,
    pub by_position: [[u64; 8]; 8],
    pub totals: OverflowTotals,
}

impl OverflowCensus {
    pub fn empty() -> Self {
        Self { per_block: Vec::new(), by_position: [[0; 8]; 8], totals: OverflowTotals::default() }
    }

    pub fn total(&self) -> u64 {
        self.totals.interior + self.totals.boundary
    }

    /// Fraction of overflow pixels that sit on block boundaries.
    pub fn boundary_share(&self) -> Option<f64> {
        let total = self.total();
        (total > 0).then(|| self.totals.boundary as f64 / total as f64)
    }

    /// Appends another image's census (corpus aggregation).
    pub fn merge(&mut self, other: &OverflowCensus) {
        self.per_block.extend_from_slice(&other.per_block);
        for r in 0..8 {
            for c in 0..8 {
                self.by_position[r][c] += other.by_position[r][c];
            }
        }
        self.totals.interior += other.totals.interior;
        self.totals.boundary += other.totals.boundary;
        self.totals.corner += other.totals.corner;
    }
}

fn block_overflow(block: &Block) -> BlockOverflow {
    let mut out = BlockOverflow::default();
    for (i, &s) in block.iter().enumerate() {
        if overflows(s) {
            match region_of(i) {
                Region::Interior => out.interior += 1,
                Region::Boundary => out.boundary += 1,
            }
        }
    }
    out
}

/// Counts overflowing pixels of a real-valued (pre-truncation) reconstruction.
pub fn overflow_census(img: &SpatialImage) -> OverflowCensus {
    let mut census = OverflowCensus::empty();
    census.per_block.reserve(img.block_count());
    for bi in 0..img.block_count() {
        let block = img.block(bi);
        census.per_block.push(block_overflow(&block));
        for (i, &s) in block.iter().enumerate() {
            if overflows(s) {
                census.by_position[i / 8][i % 8] += 1;
                match region_of(i) {
                    Region::Interior => census.totals.interior += 1,
                    Region::Boundary => census.totals.boundary += 1,
                }
                if is_corner(i) {
                    census.totals.corner += 1;
                }
            }
        }
    }
    census
}

/// Moves overflowing pixels in `region` to `127 - t1` / `-128 + t1`.
/// Returns how many pixels were changed.
pub fn clamp_region(block: &mut Block, region: impl IntoIterator<Item = usize>, t1: f64) -> usize {
    let mut changed = 0;
    for i in region {
        let s = block[i];
        if s > PIXEL_MAX {
            block[i] = PIXEL_MAX - t1;
            changed += 1;
        } else if s < PIXEL_MIN {
            block[i] = PIXEL_MIN + t1;
            changed += 1;
        }
    }
    changed
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreprocessParams {
    /// Clamp intensity in pixel levels.
    pub t1: f64,
    /// Interior is clamped when its overflow count exceeds this.
    pub o1: usize,
    /// Boundary is clamped when its overflow count is below this.
    pub o2: usize,
}

impl Default for PreprocessParams {
    fn default() -> Self {
        Self { t1: 8.0, o1: 0, o2: 18 }
    }
}

impl PreprocessParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.t1 >= 0.0 && self.t1.is_finite()) {
            return Err(invalid(format!("t1 must be finite and >= 0, got {}", self.t1)));
        }
        if self.o2 > 28 {
            return Err(invalid(format!("o2 must be in 0..=28, got {}", self.o2)));
        }
        Ok(())
    }
}

/// Coefficients after overflow removal, plus what was touched.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub image: CoeffImage,
    pub interior_modified: usize,
    pub boundary_modified: usize,
    pub blocks_modified: usize,
}

struct BlockEdit {
    coeffs: CoeffBlock,
    interior: usize,
    boundary: usize,
    touched: bool,
}

fn rewrite_blocks(
    c: &CoeffImage,
    edit: impl Fn(&mut Block) -> (usize, usize) + Sync,
) -> Preprocessed {
    let qt = *c.qtable();
    let edits: Vec<BlockEdit> = c
        .blocks()
        .par_iter()
        .map(|coeffs| {
            let mut spatial = block_to_spatial(coeffs, &qt);
            let (interior, boundary) = edit(&mut spatial);
            let touched = interior + boundary > 0;
            let coeffs = if touched { block_from_spatial(&spatial, &qt) } else { *coeffs };
            BlockEdit { coeffs, interior, boundary, touched }
        })
        .collect();

    let mut image = c.clone();
    let mut out = Preprocessed {
        image: c.clone(),
        interior_modified: 0,
        boundary_modified: 0,
        blocks_modified: 0,
    };
    for (dst, e) in image.blocks_mut().iter_mut().zip(&edits) {
        *dst = e.coeffs;
        out.interior_modified += e.interior;
        out.boundary_modified += e.boundary;
        out.blocks_modified += usize::from(e.touched);
    }
    out.image = image;
    out
}

/// Boundary-aware preprocessing: produces the robust cover.
pub fn preprocess_cover(c: &CoeffImage, p: &PreprocessParams) -> Preprocessed {
    let part = partition_block();
    let (t1, o1, o2) = (p.t1, p.o1, p.o2);
    rewrite_blocks(c, |block| {
        let census = block_overflow(block);
        if census.interior <= o1 {
            return (0, 0);
        }
        let interior = clamp_region(block, part.interior.iter().copied(), t1);
        let boundary = if census.boundary < o2 {
            clamp_region(block, part.boundary.iter().copied(), t1)
        } else {
            0
        };
        (interior, boundary)
    })
}

/// Clamp every overflowing pixel of every overflowing block.
pub fn full_clamp_baseline(c: &CoeffImage, t1: f64) -> Preprocessed {
    rewrite_blocks(c, |block| {
        let mut interior = 0;
        let mut boundary = 0;
        for i in 0..BLOCK_LEN {
            if clamp_region(block, [i], t1) > 0 {
                match region_of(i) {
                    Region::Interior => interior += 1,
                    Region::Boundary => boundary += 1,
                }
            }
        }
        (interior, boundary)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCover {
    pub image: CoeffImage,
    /// Clamp passes actually applied.
    pub rounds: usize,
    /// False when overflow remained after `max_rounds` passes.
    pub converged: bool,
}

pub const DEFAULT_REFERENCE_ROUNDS: usize = 3;

/// Repeats full clamping until the reconstruction is overflow-free or
/// `max_rounds` passes have run.
pub fn build_reference_cover(robust: &CoeffImage, t1: f64, max_rounds: usize) -> ReferenceCover {
    let mut current = robust.clone();
    let mut rounds = 0;
    loop {
        if overflow_census(&to_spatial(&current)).total() == 0 {
            return ReferenceCover { image: current, rounds, converged: true };
        }
        if rounds == max_rounds {
            return ReferenceCover { image: current, rounds, converged: false };
        }
        current = full_clamp_baseline(&current, t1).image;
        rounds += 1;
    }
}
