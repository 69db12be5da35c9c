"""Parameter sweeps, figure presets and dataset emission"""
