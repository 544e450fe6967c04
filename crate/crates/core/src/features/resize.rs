/// Bilinear resampling of an interleaved f64 raster with pixel centres at
/// half-integer coordinates: destination x samples source
/// `(x + 0.5) * src_w / dst_w - 0.5`, clamped to the source extent.
pub(crate) fn bilinear(
    src: &[f64],
    src_w: usize,
    src_h: usize,
    channels: usize,
    dst_w: usize,
    dst_h: usize,
) -> Vec<f64> {
    debug_assert_eq!(src.len(), src_w * src_h * channels);
    let xs = axis_taps(src_w, dst_w);
    let ys = axis_taps(src_h, dst_h);
    let mut out = vec![0.0; dst_w * dst_h * channels];
    for (dy, &(y0, y1, wy)) in ys.iter().enumerate() {
        for (dx, &(x0, x1, wx)) in xs.iter().enumerate() {
            let o = (dy * dst_w + dx) * channels;
            for ch in 0..channels {
                let at = |y: usize, x: usize| src[(y * src_w + x) * channels + ch];
                let top = at(y0, x0) * (1.0 - wx) + at(y0, x1) * wx;
                let bottom = at(y1, x0) * (1.0 - wx) + at(y1, x1) * wx;
                out[o + ch] = top * (1.0 - wy) + bottom * wy;
            }
        }
    }
    out
}

fn axis_taps(src: usize, dst: usize) -> Vec<(usize, usize, f64)> {
    let scale = src as f64 / dst as f64;
    let last = (src - 1) as f64;
    (0..dst)
        .map(|d| {
            let pos = ((d as f64 + 0.5) * scale - 0.5).clamp(0.0, last);
            let i0 = pos.floor() as usize;
            let i1 = (i0 + 1).min(src - 1);
            (i0, i1, pos - i0 as f64)
        })
        .collect()
}
