from setuptools import setup, find_packages

# list dependencies from file
with open('requirements.txt') as f:
    content = f.readlines()
requirements = [x.strip() for x in content if x.strip() and not x.startswith('#')]

setup(
    name='eigenbounds',
    version='1.0.0',
    description="Rigorous lower bounds and variational upper bounds for eigenvalues of one-electron molecular Hamiltonians",
    package_dir={'': 'src'},
    packages=find_packages(where='src'),  # It will find all packages under src/
    install_requires=requirements,
    extras_require={'test': ['pytest>=7.4.0']},
    entry_points={
        'console_scripts': [
            'eigenbounds=eigenbounds.main:main',
        ],
    },
    python_requires='>=3.9',
)
