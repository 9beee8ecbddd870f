from ._splitaztec import (
    BranchCutError,
    GeometryError,
    NumericalError,
    ValidationError,
    __version__,
    chi_square,
    classify,
    coupling,
    covering_count,
    decay_profile,
    eigenvalues,
    exact_probability,
    kernel_block,
    oracle_report,
    partition_function,
    phase_json,
    point_probability,
    run,
    sample_tiling,
    tiling_text,
    transfer_matrix,
)


def run_command(command, **settings):
    """Run a batch command; keyword values are converted to strings."""
    cfg = {"command": command}
    for k, v in settings.items():
        cfg[k] = ",".join(str(x) for x in v) if isinstance(v, (list, tuple)) else str(v)
    return run(cfg)
