//! Canonical landmark configurations.
//!
//! [`symmetric_face`] is a frontal, mirror-symmetric face about the vertical
//! line `x = 160` with level shoulders. Its key landmarks are
//!
//! | index | role                | point      |
//! |-------|---------------------|------------|
//! | 36    | outer canthus (R)   | (100, 100) |
//! | 39    | inner canthus (R)   | (140, 100) |
//! | 42    | inner canthus (L)   | (180, 100) |
//! | 45    | outer canthus (L)   | (220, 100) |
//! | 48    | mouth corner (R)    | (130, 200) |
//! | 54    | mouth corner (L)    | (190, 200) |
//! | 68    | shoulder (R)        | (60, 300)  |
//! | 69    | shoulder (L)        | (260, 300) |

use crate::landmark::{LandmarkSet, Point2, LANDMARK_COUNT};
use crate::scalar::Scalar;

/// Vertical symmetry axis of [`symmetric_face`].
pub const SYMMETRY_AXIS_X: f64 = 160.0;

/// iBUG-68 left/right correspondence extended by the shoulders.
pub const MIRROR_INDEX: [usize; LANDMARK_COUNT] = [
    16, 15, 14, 13, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0, // jaw
    26, 25, 24, 23, 22, 21, 20, 19, 18, 17, // brows
    27, 28, 29, 30, 35, 34, 33, 32, 31, // nose
    45, 44, 43, 42, 47, 46, 39, 38, 37, 36, 41, 40, // eyes
    54, 53, 52, 51, 50, 49, 48, 59, 58, 57, 56, 55, // outer lip
    64, 63, 62, 61, 60, 67, 66, 65, // inner lip
    69, 68, // shoulders
];

// Subject-right half plus the midline; the left half is mirrored from it.
const RIGHT_HALF: &[(usize, f64, f64)] = &[
    (0, 70.0, 95.0),
    (1, 72.0, 125.0),
    (2, 76.0, 155.0),
    (3, 82.0, 185.0),
    (4, 92.0, 212.0),
    (5, 106.0, 236.0),
    (6, 122.0, 255.0),
    (7, 140.0, 268.0),
    (8, 160.0, 272.0),
    (17, 82.0, 78.0),
    (18, 95.0, 68.0),
    (19, 110.0, 65.0),
    (20, 125.0, 67.0),
    (21, 140.0, 72.0),
    (27, 160.0, 95.0),
    (28, 160.0, 115.0),
    (29, 160.0, 135.0),
    (30, 160.0, 155.0),
    (31, 145.0, 165.0),
    (32, 152.0, 168.0),
    (33, 160.0, 170.0),
    (36, 100.0, 100.0),
    (37, 112.0, 92.0),
    (38, 128.0, 92.0),
    (39, 140.0, 100.0),
    (40, 128.0, 106.0),
    (41, 112.0, 106.0),
    (48, 130.0, 200.0),
    (49, 140.0, 192.0),
    (50, 152.0, 188.0),
    (51, 160.0, 190.0),
    (57, 160.0, 214.0),
    (58, 150.0, 212.0),
    (59, 140.0, 208.0),
    (60, 136.0, 200.0),
    (61, 148.0, 196.0),
    (62, 160.0, 196.0),
    (66, 160.0, 204.0),
    (67, 148.0, 204.0),
    (68, 60.0, 300.0),
];

/// The canonical symmetric face, image id `"F0"`.
pub fn symmetric_face<T: Scalar>() -> LandmarkSet<T> {
    let mut pts = [None; LANDMARK_COUNT];
    for &(i, x, y) in RIGHT_HALF {
        pts[i] = Some((x, y));
        pts[MIRROR_INDEX[i]] = Some((2.0 * SYMMETRY_AXIS_X - x, y));
    }
    let points = pts
        .iter()
        .map(|p| {
            let (x, y) = p.expect("every landmark covered by the half template");
            Point2::new(T::lit(x), T::lit(y))
        })
        .collect();
    LandmarkSet::new("F0", points)
}

/// Reflects every point about the vertical line `x = axis_x` and swaps the
/// left/right index roles, producing an anatomically consistent mirror image.
pub fn mirror<T: Scalar>(ls: &LandmarkSet<T>, axis_x: T) -> LandmarkSet<T> {
    let two = T::lit(2.0);
    let points = (0..ls.len())
        .map(|i| {
            let p = ls.point(MIRROR_INDEX[i]);
            Point2::new(two * axis_x - p.x, p.y)
        })
        .collect();
    LandmarkSet::new(ls.image_id.clone(), points)
}
