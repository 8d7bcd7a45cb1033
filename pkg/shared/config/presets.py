"""
Named solver and tolerance presets for different run budgets
"""

# Predefined solver configurations
SOLVER_PRESETS = {
    'smoke': {
        'N': 10,
        'M': 2_000,
        'degree': 2,
        'description': 'Seconds-scale runs for wiring checks'
    },
    'desk': {
        'N': 50,
        'M': 50_000,
        'degree': 3,
        'description': 'Desk-scale runs used by the theorem experiments (recommended)'
    },
    'accurate': {
        'N': 100,
        'M': 100_000,
        'degree': 3,
        'description': 'Closed-form calibration runs'
    }
}

# Tolerance policies for experiment assertions
TOLERANCE_PRESETS = {
    'strict': {
        'stat_multiplier': 2.0,
        'deterministic_slack': 1e-8,
        'tail_ratio_max': 0.25,
        'description': 'Tight statistical band, for large M'
    },
    'standard': {
        'stat_multiplier': 3.0,
        'deterministic_slack': 1e-6,
        'tail_ratio_max': 0.5,
        'description': 'Three standard errors plus optimizer slack (recommended)'
    },
    'loose': {
        'stat_multiplier': 4.0,
        'deterministic_slack': 1e-4,
        'tail_ratio_max': 0.75,
        'description': 'Smoke-scale runs with few paths'
    }
}


def get_solver_preset(preset_name):
    """
    Get solver configuration by preset name

    Args:
        preset_name: Name of the preset

    Returns:
        Dictionary with N, M and degree values
    """
    if preset_name in SOLVER_PRESETS:
        return SOLVER_PRESETS[preset_name].copy()
    raise ValueError(f"Unknown solver preset: {preset_name}. Available: {list(SOLVER_PRESETS.keys())}")


def get_tolerance_preset(preset_name):
    """Get tolerance policy values by preset name"""
    if preset_name in TOLERANCE_PRESETS:
        return TOLERANCE_PRESETS[preset_name].copy()
    raise ValueError(f"Unknown tolerance preset: {preset_name}. Available: {list(TOLERANCE_PRESETS.keys())}")


def describe_presets():
    """Return printable lines describing every preset"""
    lines = ["Solver presets:"]
    for name, config in SOLVER_PRESETS.items():
        lines.append(f"  {name:10} N={config['N']:<4} M={config['M']:<7} degree={config['degree']}  {config['description']}")
    lines.append("Tolerance presets:")
    for name, config in TOLERANCE_PRESETS.items():
        lines.append(f"  {name:10} k={config['stat_multiplier']} slack={config['deterministic_slack']}  {config['description']}")
    return lines
