"""Tucker-compression classification study on corrupted training images.

Training images are stacked into a 3-way tensor (rows x cols x samples) and
decomposed with feature-mode ranks (d, d) and full sample-mode rank. The two
feature bases compress every training and testing image to a d*d vector and
a nearest-neighbor rule assigns the class of the closest compressed training
column (ties: lowest class index, then lowest sample index). Vectorized
PCA / L1-PCA baselines and a plain nearest-neighbor baseline run alongside
the four Tucker solvers.

Corruption model: with probability ``alpha`` a training image is corrupted;
each pixel of a corrupted image is hit with probability ``beta`` by additive
uniform noise on [0, v], where v is set so the per-pixel noise RMS equals
``noise_ratio`` times the average pixel RMS of the clean training stack
(uniform second moment v^2/3). Testing images are always left clean.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .. import defaults
from ..l1pca import l1pca_ao
from ..linalg import dominant_left_basis
from ..sampling import STREAM_CORRUPT, STREAM_DATA, STREAM_SPLIT, standard_normal, stream_rng
from ..tensor import multi_mode_product, unfold
from .reconstruction import solve
from .results import ResultRow, ResultTable, aggregate

TUCKER_SOLVERS = ("hosvd", "hooi", "l1-hosvd", "l1-hooi")
BASELINES = ("pca", "l1-pca", "nn")
CLASSIFY_SOLVERS = TUCKER_SOLVERS + BASELINES

_SWEEPABLE = ("alpha", "beta", "rank", "noise_ratio")


@dataclass(frozen=True)
class ClassifyExperimentSpec:
    """Configuration of one classification study (JSON fields map one-to-one)."""

    classes: int = 5
    samples_per_class: int = 10
    image_dim: int = 28
    rank: int = 5
    alpha: float = 0.0
    beta: float = 0.5
    noise_ratio: float = defaults.NOISE_RMS_RATIO
    test_per_class: int = 100
    trials: int = 1
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.rank <= self.image_dim:
            raise ValueError(f"rank must lie in [1, {self.image_dim}]")
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.beta <= 1.0):
            raise ValueError("alpha and beta must lie in [0, 1]")
        if min(self.classes, self.samples_per_class, self.test_per_class, self.trials) < 1:
            raise ValueError("classes, sample counts, and trials must be >= 1")


@dataclass(frozen=True)
class ImageDataset:
    """Labeled square grayscale images, values in [0, 255]."""

    images: np.ndarray  # (count, dim, dim) float64
    labels: np.ndarray  # (count,) int64

    def __post_init__(self):
        if self.images.ndim != 3 or self.images.shape[1] != self.images.shape[2]:
            raise ValueError(f"images must be (count, dim, dim), got {self.images.shape}")
        if len(self.labels) != len(self.images):
            raise ValueError("images and labels must have matching counts")

    @property
    def image_dim(self) -> int:
        return self.images.shape[1]

    def class_indices(self, label: int) -> np.ndarray:
        return np.flatnonzero(self.labels == label)


# 8x8 stroke bitmaps for the ten digits, used by the synthetic surrogate.
_GLYPHS = {
    0: ("..####..", ".#....#.", ".#....#.", ".#....#.", ".#....#.", ".#....#.", ".#....#.", "..####.."),
    1: ("...##...", "..###...", "...##...", "...##...", "...##...", "...##...", "...##...", ".######."),
    2: ("..####..", ".#....#.", "......#.", ".....#..", "....#...", "...#....", "..#.....", ".######."),
    3: ("..####..", ".#....#.", "......#.", "...###..", "......#.", "......#.", ".#....#.", "..####.."),
    4: ("....##..", "...#.#..", "..#..#..", ".#...#..", ".######.", ".....#..", ".....#..", ".....#.."),
    5: (".######.", ".#......", ".#......", ".#####..", "......#.", "......#.", ".#....#.", "..####.."),
    6: ("..####..", ".#......", ".#......", ".#####..", ".#....#.", ".#....#.", ".#....#.", "..####.."),
    7: (".######.", "......#.", ".....#..", "....#...", "....#...", "...#....", "...#....", "...#...."),
    8: ("..####..", ".#....#.", ".#....#.", "..####..", ".#....#.", ".#....#.", ".#....#.", "..####.."),
    9: ("..####..", ".#....#.", ".#....#.", "..#####.", "......#.", "......#.", "......#.", "..####.."),
}


def _glyph_canvas(digit: int, image_dim: int) -> np.ndarray:
    bitmap = np.array(
        [[1.0 if ch == "#" else 0.0 for ch in row] for row in _GLYPHS[digit % 10]]
    )
    scale = max(1, (image_dim - 4) // 8)
    glyph = np.kron(bitmap, np.ones((scale, scale)))
    if glyph.shape[0] > image_dim:
        raise ValueError(f"image_dim {image_dim} too small for the 8x8 glyphs")
    canvas = np.zeros((image_dim, image_dim))
    off = (image_dim - glyph.shape[0]) // 2
    canvas[off : off + glyph.shape[0], off : off + glyph.shape[1]] = glyph
    return canvas


def synthesize_digit_pool(
    n_classes: int, per_class: int, image_dim: int, rng: np.random.Generator
) -> ImageDataset:
    """Digit-like surrogate images: shifted, brightness-jittered noisy glyphs."""
    canvases = [_glyph_canvas(c, image_dim) for c in range(n_classes)]
    max_shift = min(3, (image_dim - 1) // 8)
    images = np.zeros((n_classes * per_class, image_dim, image_dim))
    labels = np.zeros(n_classes * per_class, dtype=np.int64)
    i = 0
    for c in range(n_classes):
        for _ in range(per_class):
            shift = rng.integers(-max_shift, max_shift + 1, size=2)
            img = np.roll(canvases[c], tuple(shift), axis=(0, 1))
            img = img * (150.0 + 100.0 * rng.random())
            img = img + 20.0 * standard_normal(rng, (image_dim, image_dim))
            images[i] = np.clip(img, 0.0, 255.0)
            labels[i] = c
            i += 1
    return ImageDataset(images, labels)


def corrupt_training_images(
    x: np.ndarray, spec: ClassifyExperimentSpec, rng: np.random.Generator
) -> np.ndarray:
    """Apply the image/pixel two-level uniform corruption to a (D, D, M) stack.

    Consumes ``rng`` in a fixed order (image uniforms, pixel uniforms, noise
    uniforms), each full-size, so corruption patterns are nested across
    ``alpha``/``beta`` grids and values scale with ``noise_ratio``.
    """
    n_images = x.shape[2]
    u_image = rng.random(n_images)
    u_pixel = rng.random(x.shape)
    u_noise = rng.random(x.shape)
    pixel_rms = float(np.sqrt(np.mean(x**2)))
    amplitude = np.sqrt(3.0) * spec.noise_ratio * pixel_rms
    mask = (u_pixel < spec.beta) & (u_image < spec.alpha)[None, None, :]
    return x + amplitude * u_noise * mask


def nearest_class(
    train_feats: np.ndarray,
    train_labels: np.ndarray,
    test_feats: np.ndarray,
    n_classes: int,
) -> np.ndarray:
    """Assign each test column the class holding the nearest train column.

    Distance ties resolve to the lowest class index and, within a class, the
    lowest sample index.
    """
    sq_train = np.sum(train_feats**2, axis=0)
    sq_test = np.sum(test_feats**2, axis=0)
    d2 = sq_train[:, None] + sq_test[None, :] - 2.0 * (train_feats.T @ test_feats)
    per_class = np.stack(
        [d2[train_labels == c].min(axis=0) for c in range(n_classes)]
    )
    return per_class.argmin(axis=0)


def _features(name, x_train, y_test, spec):
    """(train, test) feature columns for one solver name."""
    d = spec.rank
    if name in TUCKER_SOLVERS:
        model = solve(name, x_train, (d, d, x_train.shape[2]))
        project = [model.bases[0].T, model.bases[1].T]
        g_train = unfold(multi_mode_product(x_train, project, [0, 1]), 2).T
        g_test = unfold(multi_mode_product(y_test, project, [0, 1]), 2).T
        return g_train, g_test
    flat_train = unfold(x_train, 2).T  # pixels x samples
    flat_test = unfold(y_test, 2).T
    if name == "nn":
        return flat_train, flat_test
    k = min(d * d, x_train.shape[2])
    basis = dominant_left_basis(flat_train, k)
    if name == "l1-pca":
        basis = l1pca_ao(flat_train, basis).basis
    elif name != "pca":
        raise ValueError(f"unknown solver {name!r}")
    return basis.T @ flat_train, basis.T @ flat_test


def _sample_split(pool: ImageDataset, per_class, n_classes, rng) -> tuple[np.ndarray, np.ndarray]:
    """Stack per-class draws into a (D, D, total) tensor plus class labels."""
    picks = []
    for c in range(n_classes):
        idx = pool.class_indices(c)
        if len(idx) < per_class:
            raise ValueError(
                f"class {c} has only {len(idx)} samples, need {per_class}"
            )
        picks.append(rng.choice(idx, size=per_class, replace=False))
    sel = np.concatenate(picks)
    labels = np.repeat(np.arange(n_classes), per_class)
    return np.moveaxis(pool.images[sel], 0, 2), labels


def _run_trial(spec, trial, param_name, values, train_pool, test_pool, solvers):
    split_rng = stream_rng(spec.seed, trial, STREAM_SPLIT)
    x_train, train_labels = _sample_split(
        train_pool, spec.samples_per_class, spec.classes, split_rng
    )
    y_test, test_labels = _sample_split(
        test_pool, spec.test_per_class, spec.classes, split_rng
    )
    out = {}
    for value in values:
        point = replace(spec, **{param_name: value})
        corr_rng = stream_rng(spec.seed, trial, STREAM_CORRUPT)
        x_corr = corrupt_training_images(x_train, point, corr_rng)
        for name in solvers:
            try:
                g_train, g_test = _features(name, x_corr, y_test, point)
                pred = nearest_class(g_train, train_labels, g_test, spec.classes)
                out[(name, value)] = float(np.mean(pred == test_labels))
            except Exception:
                out[(name, value)] = None
    return out


def run_classification_sweep(
    spec: ClassifyExperimentSpec,
    param_name: str,
    values,
    train_pool: ImageDataset,
    test_pool: ImageDataset,
    solvers=CLASSIFY_SOLVERS,
    n_workers: int = 1,
) -> ResultTable:
    """Mean accuracy per solver across ``values`` of one swept spec field."""
    if param_name not in _SWEEPABLE:
        raise ValueError(f"param_name must be one of {_SWEEPABLE}")
    for pool, role in ((train_pool, "train"), (test_pool, "test")):
        if pool.image_dim != spec.image_dim:
            raise ValueError(
                f"{role} pool is {pool.image_dim}x{pool.image_dim}, "
                f"spec wants {spec.image_dim}"
            )
    values = [int(v) if param_name == "rank" else float(v) for v in values]
    for v in values:
        replace(spec, **{param_name: v})
    for name in solvers:
        if name not in CLASSIFY_SOLVERS:
            raise ValueError(f"unknown solver {name!r}")

    if n_workers == 0:
        import os

        n_workers = os.cpu_count() or 1
    args = (param_name, values, train_pool, test_pool, solvers)
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            per_trial = list(
                pool.map(lambda t: _run_trial(spec, t, *args), range(spec.trials))
            )
    else:
        per_trial = [_run_trial(spec, t, *args) for t in range(spec.trials)]

    table = ResultTable()
    for name in solvers:
        for value in values:
            scores = [r[(name, value)] for r in per_trial]
            ok = [s for s in scores if s is not None]
            n_fail = len(scores) - len(ok)
            if n_fail:
                table.failures[(name, float(value))] = n_fail
            if not ok:
                continue
            mean, err = aggregate(ok)
            table.rows.append(
                ResultRow(name, param_name, float(value), mean, err, len(ok))
            )
    return table


def run_classification(
    spec: ClassifyExperimentSpec,
    train_pool: ImageDataset,
    test_pool: ImageDataset,
    solvers=CLASSIFY_SOLVERS,
    n_workers: int = 1,
) -> ResultTable:
    """Single-point study at the spec's own ``alpha`` (a one-value sweep)."""
    return run_classification_sweep(
        spec, "alpha", [spec.alpha], train_pool, test_pool, solvers, n_workers
    )


def default_pools(
    spec: ClassifyExperimentSpec, train_per_class: int | None = None, test_per_class: int | None = None
) -> tuple[ImageDataset, ImageDataset]:
    """Synthetic train/test pools sized for per-trial resampling."""
    rng = stream_rng(spec.seed, 0, STREAM_DATA)
    train = synthesize_digit_pool(
        spec.classes,
        train_per_class or max(4 * spec.samples_per_class, 40),
        spec.image_dim,
        rng,
    )
    test = synthesize_digit_pool(
        spec.classes,
        test_per_class or max(2 * spec.test_per_class, 100),
        spec.image_dim,
        rng,
    )
    return train, test
