use super::{BBox, Contour};

/// Sorts contours the way a sheet is read.
///
/// Two contours share a row when their vertical extents overlap by at least
/// half the smaller height; rows are the connected groups of that relation.
/// Rows run top to bottom by mean centre-y, and contours within a row left
/// to right by centre-x.
pub fn reading_order(contours: Vec<Contour>) -> Vec<Contour> {
    let boxes: Vec<BBox> = contours.iter().map(|c| c.bbox).collect();
    let order = reading_order_indices(&boxes);
    let mut slots: Vec<Option<Contour>> = contours.into_iter().map(Some).collect();
    order
        .into_iter()
        .map(|i| slots[i].take().expect("permutation"))
        .collect()
}

/// Index permutation that puts `boxes` in reading order.
pub(crate) fn reading_order_indices(boxes: &[BBox]) -> Vec<usize> {
    let n = boxes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if share_row(&boxes[i], &boxes[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }

    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut row_of_root = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if row_of_root[r] == usize::MAX {
            row_of_root[r] = rows.len();
            rows.push(Vec::new());
        }
        rows[row_of_root[r]].push(i);
    }

    let cx = |i: usize| boxes[i].center().0;
    let cy = |i: usize| boxes[i].center().1;
    let mut keyed: Vec<(f64, Vec<usize>)> = rows
        .into_iter()
        .map(|mut row| {
            row.sort_by(|&a, &b| cx(a).total_cmp(&cx(b)).then(a.cmp(&b)));
            let mean_y = row.iter().map(|&i| cy(i)).sum::<f64>() / row.len() as f64;
            (mean_y, row)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1[0].cmp(&b.1[0])));
    keyed.into_iter().flat_map(|(_, row)| row).collect()
}

fn share_row(a: &BBox, b: &BBox) -> bool {
    let top = a.y.max(b.y);
    let bottom = (a.y + a.height).min(b.y + b.height);
    let overlap = bottom.saturating_sub(top) as f64;
    overlap >= 0.5 * a.height.min(b.height) as f64
}
