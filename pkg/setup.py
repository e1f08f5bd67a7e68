"""
sis-rdhei installation configuration.
"""

from setuptools import setup, find_packages

setup(
    name="sis-rdhei",
    version="0.1.0",
    package_dir={"": "src"},  # Tell setuptools packages are under src/
    packages=find_packages(where="src"),  # Find packages under src/
    install_requires=[
        "numpy>=1.24",
        "pillow>=10.0",  # PGM I/O
        "cryptography>=41.0",  # AES-256-CTR keystreams
        "typer>=0.9",
        "loguru>=0.7",
        "rich",  # For pretty printing
    ],
    entry_points={
        "console_scripts": [
            "sis-rdhei=sis_rdhei.cli:app",
        ],
    },
    description="Reversible data hiding in secret-shared encrypted grayscale images",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Topic :: Security :: Cryptography",
    ],
    python_requires=">=3.9",
)
