use std::fmt;

/// A grid cell. The cell's closed unit square spans half a unit around its
/// centre, so cell (x, y) covers [x-1/2, x+1/2] x [y-1/2, y+1/2].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub x: i64,
    pub y: i64,
}

impl Cell {
    pub fn new(x: i64, y: i64) -> Self {
        Cell { x, y }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Cell {
    fn from((x, y): (i64, i64)) -> Self {
        Cell::new(x, y)
    }
}

pub fn chebyshev(a: Cell, b: Cell) -> i64 {
    (a.x - b.x).abs().max((a.y - b.y).abs())
}

pub fn euclid_sq(a: Cell, b: Cell) -> i64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    dx * dx + dy * dy
}

/// Every cell whose closed unit square is touched by the segment between
/// the centres of `p` and `q`, in traversal order, endpoints included.
///
/// This is the supercover of the segment: strictly more cells than a
/// Bresenham line, because a cell counts even when the segment only grazes
/// its boundary. When the segment passes exactly through a grid corner, the
/// two cells touched only at that point are emitted before the diagonal
/// step, left-of-travel first, which makes the sequence reverse exactly:
/// `supercover_line(q, p) == reverse(supercover_line(p, q))`.
pub fn supercover_line(p: Cell, q: Cell) -> Vec<Cell> {
    if p == q {
        return vec![p];
    }
    let dx = q.x - p.x;
    let dy = q.y - p.y;
    let sx = dx.signum();
    let sy = dy.signum();
    let adx = dx.abs();
    let ady = dy.abs();

    // The segment crosses the i-th vertical cell boundary at parameter
    // (2i-1)/(2*adx), and similarly for horizontal boundaries. Walking the
    // crossings in parameter order visits the cells in traversal order;
    // equal parameters mean the segment passes through a grid corner.
    let mut out = Vec::with_capacity((adx + ady + 1) as usize);
    let mut cur = p;
    out.push(cur);
    let mut i = 1; // next vertical crossing
    let mut j = 1; // next horizontal crossing
    while i <= adx || j <= ady {
        let tx = if i <= adx { Some((2 * i - 1) * ady) } else { None };
        let ty = if j <= ady { Some((2 * j - 1) * adx) } else { None };
        match (tx, ty) {
            (Some(tx), Some(ty)) if tx == ty => {
                // Corner pass-through: both side cells are touched at a
                // single point. Left of the travel direction comes first.
                let side_x = Cell::new(cur.x + sx, cur.y);
                let side_y = Cell::new(cur.x, cur.y + sy);
                if sx * sy > 0 {
                    out.push(side_y);
                    out.push(side_x);
                } else {
                    out.push(side_x);
                    out.push(side_y);
                }
                cur = Cell::new(cur.x + sx, cur.y + sy);
                out.push(cur);
                i += 1;
                j += 1;
            }
            (Some(tx), Some(ty)) if tx < ty => {
                cur = Cell::new(cur.x + sx, cur.y);
                out.push(cur);
                i += 1;
            }
            (Some(_), Some(_)) => {
                cur = Cell::new(cur.x, cur.y + sy);
                out.push(cur);
                j += 1;
            }
            (Some(_), None) => {
                cur = Cell::new(cur.x + sx, cur.y);
                out.push(cur);
                i += 1;
            }
            (None, Some(_)) => {
                cur = Cell::new(cur.x, cur.y + sy);
                out.push(cur);
                j += 1;
            }
            (None, None) => unreachable!("loop condition"),
        }
    }
    debug_assert_eq!(cur, q);
    out
}
