from setuptools import setup, find_packages
 
setup(
    name='nijenhuis-morita',
    version='0.1',
    description='Exact symbolic checks for Nijenhuis, Dirac and Morita '
                'geometry on coordinate charts',
    long_description=open("README.rst").read(),
    keywords='nijenhuis dirac poisson morita lie-algebroid symbolic',
    license='MIT',
    packages=find_packages(exclude=['tests']),
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Operating System :: OS Independent',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    install_requires = [
        'Django>=3.2',
        'sympy>=1.12',
        ],
    entry_points={
        'console_scripts': [
            'nijenhuis = nijenhuis.cli:main',
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
