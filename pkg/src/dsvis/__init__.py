"""Time series downsampling algorithms and chart-fidelity evaluation."""
from .algorithms import ALGORITHMS, DownsampleSpec, downsample, every_nth, lttb, m4, materialize, min_max
from .data import MetricRecord, TemplateSpec, generate_noise, load_series, read_records, save_series, write_records
from .errors import DsvisError, ParseError, ValidationError
from .metrics import ReprScores, compare_images, dssim, evaluate_representativeness, mse, or_conv_mask, pem20, ssim_map
from .raster import RasterImage, RenderConfig, pixel_perfect_m4_spec, render
from .series import TimeSeries, partition, slice_view, validate
from .stability import OFFSET_SUITE, StabilityScores, ViewUpdate, apply_update, evaluate_stability, update_suite

__version__ = "0.1.0"
