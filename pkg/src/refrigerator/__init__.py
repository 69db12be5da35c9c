"""Three-qubit absorption refrigerator under the global master equation"""
