"""
sis-rdhei: reversible data hiding over secret-shared encrypted images
"""
