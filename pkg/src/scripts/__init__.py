"""Pipeline stages: hull, sampling, data generation, training, evaluation and sweeps."""
